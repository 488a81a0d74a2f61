#include "dickman/classifier.hpp"

#include <cmath>

#include "dickman/errors.hpp"
#include "doctest.h"

using dickman::classify_shuffle;
using dickman::classify_theorem2;
using dickman::kappa_indices;
using dickman::LimitVerdict;
using dickman::MixingLaw;
using dickman::MuSchedule;
using dickman::PSchedule;
using dickman::SetSize;

TEST_CASE("kappa indices use exact comparisons") {
  auto k1 = kappa_indices(MuSchedule(1.0, {0.0, 0.0, 3.0}),
                          PSchedule(1.0, {1.0, 1.0}));
  REQUIRE(k1.kappa_mu.has_value());
  CHECK(*k1.kappa_mu == 2);
  CHECK_FALSE(k1.kappa_p.has_value());

  auto k2 = kappa_indices(MuSchedule(1.0, {0.0, 0.0}),
                          PSchedule(1.0, {2.0, 1.0}));
  CHECK_FALSE(k2.kappa_mu.has_value());
  REQUIRE(k2.kappa_p.has_value());
  CHECK(*k2.kappa_p == 0);

  auto k3 = kappa_indices(MuSchedule(1.0, {1.0}),
                          PSchedule(1.0, {1.0, 1.0, 0.9}));
  CHECK(*k3.kappa_mu == 0);
  CHECK(*k3.kappa_p == 2);
}

TEST_CASE("theorem-2 verdicts: the canonical table") {
  // mu_k = k, p_k = 1/k
  auto v1 = classify_theorem2(MuSchedule(1.0, {1.0}), PSchedule(1.0, {1.0}));
  REQUIRE(v1.is_dickman());
  CHECK(v1.theta() == 1.0);
  CHECK(v1.scale() == 1.0);
  CHECK(v1.mixing().is_point_mass_one());

  // mu_k = log k, p_k = 1/(k log k)
  auto v2 = classify_theorem2(MuSchedule(1.0, {0.0, 1.0}),
                              PSchedule(1.0, {1.0, 1.0}));
  REQUIRE(v2.is_dickman());
  CHECK(v2.theta() == 1.0);
  CHECK(v2.scale() == 1.0);

  // mu_k = sqrt(k) against p_k = 1/(k log k): J_p exceeds J_mu
  auto v3 = classify_theorem2(MuSchedule(1.0, {0.5}),
                              PSchedule(1.0, {1.0, 1.0}));
  REQUIRE(v3.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v3.c() == 0.0);

  // bounded mu, p_k = 1/k
  auto v4 = classify_theorem2(MuSchedule(1.0, {0.0}), PSchedule(1.0, {1.0}));
  REQUIRE(v4.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v4.c() == 1.0);

  // mu_k = k, p_k = 1/sqrt(k)
  auto v5 = classify_theorem2(MuSchedule(1.0, {1.0}), PSchedule(1.0, {0.5}));
  REQUIRE(v5.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v5.c() == 1.0);

  // p_k = 1/k^2: sum p_k converges
  auto v6 = classify_theorem2(MuSchedule(1.0, {1.0}), PSchedule(1.0, {2.0}));
  REQUIRE(v6.kind() == LimitVerdict::Kind::invalid);
  CHECK_FALSE(v6.reason().empty());
}

TEST_CASE("theorem-2 theta and scale arithmetic") {
  // theta = c_p / a_{J_p}
  auto v = classify_theorem2(MuSchedule(1.0, {0.0, 2.0}),
                             PSchedule(3.0, {1.0, 1.0}));
  REQUIRE(v.is_dickman());
  CHECK(v.theta() == 1.5);
  CHECK(v.scale() == doctest::Approx(1.0 / 1.5).epsilon(1e-16));
  CHECK(v.scale() == 1.0 / v.theta());  // L stored as 1/theta exactly

  auto v2 = classify_theorem2(MuSchedule(1.0, {0.5}), PSchedule(2.0, {1.0}));
  REQUIRE(v2.is_dickman());
  CHECK(v2.theta() == 4.0);
  CHECK(v2.scale() == 0.25);

  // exponents above J_p are unconstrained by the box conditions
  auto v3 = classify_theorem2(MuSchedule(1.0, {0.0, 1.0, -5.0}),
                              PSchedule(1.0, {1.0, 1.0}));
  REQUIRE(v3.is_dickman());
  CHECK(v3.theta() == 1.0);
}

TEST_CASE("theorem-2 degenerate constant via the kappa rule") {
  // kappa_mu = 0 < kappa_p = 1 with a_0 > 0: mass escapes, c = 0
  auto v0 = classify_theorem2(MuSchedule(1.0, {1.0, 1.0}),
                              PSchedule(1.0, {1.0, 0.5}));
  REQUIRE(v0.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v0.c() == 0.0);

  // tie kappa_mu = kappa_p falls to c = 1
  auto v1 = classify_theorem2(MuSchedule(1.0, {0.0, 1.0}),
                              PSchedule(1.0, {1.0, 0.5}));
  REQUIRE(v1.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v1.c() == 1.0);

  // kappa_mu present but a_{kappa_mu} < 0: c = 1
  // (mu = 1/log k, p = log^2 k / k keeps both divergence hypotheses alive)
  auto v2 = classify_theorem2(MuSchedule(1.0, {0.0, -1.0}),
                              PSchedule(1.0, {1.0, -2.0}));
  REQUIRE(v2.kind() == LimitVerdict::Kind::degenerate);
  CHECK(v2.c() == 1.0);
}

TEST_CASE("theorem-2 invalid shapes") {
  // trailing zero exponent in p is a malformed family member
  auto v = classify_theorem2(MuSchedule(1.0, {1.0}),
                             PSchedule(1.0, {1.0, 0.0}));
  REQUIRE(v.kind() == LimitVerdict::Kind::invalid);

  // M_n bounded: mu = 1/log^2 k against p = 1/k
  auto v2 = classify_theorem2(MuSchedule(1.0, {0.0, -2.0}),
                              PSchedule(1.0, {1.0}));
  REQUIRE(v2.kind() == LimitVerdict::Kind::invalid);
}

TEST_CASE("shuffle verdicts: the three scheme archetypes") {
  auto pm1 = MixingLaw::point_mass_one();

  // E_k = {k-1}: mu_k ~ k, N = 1 -> GD(1) at scale 1
  auto top = classify_shuffle(MuSchedule(1.0, {1.0}), SetSize::of(1), pm1);
  REQUIRE(top.is_dickman());
  CHECK(top.theta() == 1.0);
  CHECK(top.scale() == 1.0);
  CHECK(top.mixing().is_point_mass_one());

  // E_k = {floor(k/2), k-1}: mu_k ~ (3/4)k, N = 2, X uniform{2/3, 4/3}
  auto mix = MixingLaw::finite_discrete({2.0 / 3.0, 4.0 / 3.0}, {0.5, 0.5});
  auto two = classify_shuffle(MuSchedule(0.75, {1.0}), SetSize::of(2), mix);
  REQUIRE(two.is_dickman());
  CHECK(two.theta() == 2.0);
  CHECK(two.scale() == 0.5);
  CHECK(two.mixing().kind() == MixingLaw::Kind::finite_discrete);

  // full insertion: mu_k ~ k/2, |E_k| -> infinity, ratio bounded -> LLN
  auto full = classify_shuffle(MuSchedule(0.5, {1.0}), SetSize::unbounded(),
                               MixingLaw::scheme_uniform(2.0));
  REQUIRE(full.kind() == LimitVerdict::Kind::degenerate);
  CHECK(full.c() == 1.0);
}

TEST_CASE("shuffle verdicts: vanishing-ratio and not-established branches") {
  auto pm1 = MixingLaw::point_mass_one();

  // singleton: mu_k = 1, ratio 1/H_n -> 0, LLN via the vanishing branch
  auto single = classify_shuffle(MuSchedule(1.0, {0.0}), SetSize::of(1), pm1);
  REQUIRE(single.kind() == LimitVerdict::Kind::degenerate);
  CHECK(single.c() == 1.0);

  // mu_k = log k with a bounded set: still vanishing
  auto lg = classify_shuffle(MuSchedule(1.0, {0.0, 1.0}), SetSize::of(3), pm1);
  REQUIRE(lg.kind() == LimitVerdict::Kind::degenerate);
  CHECK(lg.c() == 1.0);

  // mu_k = k/log k, unbounded set: ratio creeps toward 1 too slowly for the
  // decade test (max still grows 2% per decade at 10^6), so the sufficient
  // conditions are not established
  auto slow = classify_shuffle(MuSchedule(1.0, {1.0, -1.0}),
                               SetSize::unbounded(), pm1);
  REQUIRE(slow.kind() == LimitVerdict::Kind::invalid);
  CHECK_FALSE(slow.reason().empty());

  // sqrt growth with an unbounded set: ratio bounded near 1/2
  auto rt = classify_shuffle(MuSchedule(1.0, {0.5}), SetSize::unbounded(),
                             pm1);
  REQUIRE(rt.kind() == LimitVerdict::Kind::degenerate);
  CHECK(rt.c() == 1.0);
}

TEST_CASE("verdict accessors guard their kind") {
  auto d = LimitVerdict::degenerate(1.0);
  CHECK_THROWS_AS((void)d.theta(), dickman::domain_error);
  CHECK_THROWS_AS((void)d.mixing(), dickman::domain_error);
  auto v = LimitVerdict::dickman(2.0, 0.5, MixingLaw::point_mass_one());
  CHECK_THROWS_AS((void)v.c(), dickman::domain_error);
  CHECK(v.describe().find("dickman") != std::string::npos);
  CHECK(LimitVerdict::degenerate(0.0).describe().find("degenerate") !=
        std::string::npos);
  CHECK_THROWS_AS(LimitVerdict::dickman(-1.0, 1.0,
                                        MixingLaw::point_mass_one()),
                  dickman::domain_error);
  CHECK_THROWS_AS(LimitVerdict::dickman(1.0, 2.0,  // L > 1/theta
                                        MixingLaw::point_mass_one()),
                  dickman::domain_error);
  CHECK(LimitVerdict::degenerate(0.5).c() == 0.5);  // [0,1] admissible
  CHECK_THROWS_AS(LimitVerdict::degenerate(1.5), dickman::domain_error);
  CHECK_THROWS_AS(LimitVerdict::degenerate(-0.1), dickman::domain_error);
}
