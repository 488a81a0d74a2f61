#include "dickman/sampler.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "dickman/errors.hpp"
#include "dickman/numerics.hpp"
#include "dickman/simulator.hpp"
#include "doctest.h"

using dickman::DickmanParams;
using dickman::MixingLaw;
using dickman::RngStream;
using dickman::sample_gd;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / (double)v.size();
}

double var_of(const std::vector<double>& v) {
  double m = mean_of(v), s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / ((double)v.size() - 1.0);
}

}  // namespace

TEST_CASE("series sampler hits the first two cumulants") {
  auto pm1 = MixingLaw::point_mass_one();

  // E D_theta = theta, Var D_theta = theta/2
  auto b1 = sample_gd(DickmanParams(1.0), pm1, 1e-8, RngStream(42, 0), 1000000);
  REQUIRE(b1.values.size() == 1000000);
  CHECK(std::abs(mean_of(b1.values) - 1.0) < 3.0 * std::sqrt(0.5 / 1e6));
  CHECK(std::abs(var_of(b1.values) - 0.5) < 0.01);
  for (double v : b1.values) {
    if (!(v >= 0.0)) {
      CHECK(v >= 0.0);
      break;
    }
  }

  auto b2 = sample_gd(DickmanParams(2.0), pm1, 1e-8, RngStream(42, 1), 1000000);
  CHECK(std::abs(mean_of(b2.values) - 2.0) < 4.0 * std::sqrt(1.0 / 1e6));
  CHECK(std::abs(var_of(b2.values) - 1.0) < 0.01);

  // mixing with second moment: mean theta E X, variance theta E X^2 / 2
  auto mix = MixingLaw::finite_discrete({2.0 / 3.0, 4.0 / 3.0}, {0.5, 0.5});
  double ex = 1.0, ex2 = (4.0 / 9.0 + 16.0 / 9.0) / 2.0;
  auto bm = sample_gd(DickmanParams(2.0), mix, 1e-8, RngStream(42, 2), 1000000);
  CHECK(std::abs(mean_of(bm.values) - 2.0 * ex) < 0.006);
  CHECK(std::abs(var_of(bm.values) - 2.0 * ex2 / 2.0) < 0.012);
}

TEST_CASE("zero mixing annihilates every term") {
  auto zero = MixingLaw::finite_discrete({0.0}, {1.0});
  auto b = sample_gd(DickmanParams(1.0), zero, 1e-6, RngStream(1, 0), 1000);
  for (double v : b.values) CHECK(v == 0.0);
  CHECK(b.bias_bound == 0.0);  // E X = 0
}

TEST_CASE("truncation bookkeeping") {
  auto pm1 = MixingLaw::point_mass_one();
  auto b = sample_gd(DickmanParams(1.5), pm1, 1e-6, RngStream(9, 4), 20000);
  CHECK(b.truncation_tol == 1e-6);
  CHECK(b.theta == 1.5);
  CHECK(b.bias_bound > 0.0);
  CHECK(b.bias_bound <= 1e-6 * (1.5 + 1.0) * 1.0);

  // coarser tol shifts the mean down by roughly the bias scale, no more
  auto coarse = sample_gd(DickmanParams(1.0), pm1, 1e-3, RngStream(9, 5),
                          200000);
  CHECK(coarse.bias_bound <= 1e-3 * 2.0);
  CHECK(std::abs(mean_of(coarse.values) - 1.0) < 0.01);
}

TEST_CASE("sampler reproducibility across calls and streams") {
  auto pm1 = MixingLaw::point_mass_one();
  auto a = sample_gd(DickmanParams(1.0), pm1, 1e-8, RngStream(7, 3), 500);
  auto b = sample_gd(DickmanParams(1.0), pm1, 1e-8, RngStream(7, 3), 500);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    CHECK(a.values[i] == b.values[i]);

  auto c = sample_gd(DickmanParams(1.0), pm1, 1e-8, RngStream(7, 4), 500);
  std::size_t same = 0;
  for (std::size_t i = 0; i < c.values.size(); ++i)
    if (a.values[i] == c.values[i]) ++same;
  CHECK(same < 5);
}

TEST_CASE("sampled distribution matches the table CDF") {
  auto pm1 = MixingLaw::point_mass_one();
  for (double theta : {1.0, 2.0}) {
    auto table = dickman::shared_table(DickmanParams(theta));
    auto b = sample_gd(DickmanParams(theta), pm1, 1e-8,
                       RngStream(1234, (std::uint64_t)theta), 100000);
    double ks = dickman::ks_distance(
        b.values, [&](double x) { return table->cdf(x); });
    CHECK(ks < 1.63 / std::sqrt(100000.0) + 1e-4);
  }
}

TEST_CASE("fixed point identity holds, wrong exponent fails") {
  auto pm1 = MixingLaw::point_mass_one();
  double ks1 = dickman::fixed_point_check(DickmanParams(1.0), pm1, 100000,
                                          RngStream(5150, 0));
  CHECK(ks1 < 0.01);

  auto mix = MixingLaw::finite_discrete({2.0 / 3.0, 4.0 / 3.0}, {0.5, 0.5});
  double ks2 = dickman::fixed_point_check(DickmanParams(2.0), mix, 100000,
                                          RngStream(5150, 1));
  CHECK(ks2 < 0.01);

  double bad = dickman::fixed_point_check(DickmanParams(1.0), pm1, 100000,
                                          RngStream(5150, 2), 0.5 / 1.0);
  CHECK(bad > 0.05);
}

TEST_CASE("limit-scaled batches") {
  auto pm1 = MixingLaw::point_mass_one();
  auto v1 = dickman::LimitVerdict::dickman(2.0, 0.5, pm1);
  auto s1 = dickman::sample_limit_scaled(v1, 1e-8, RngStream(3, 0), 200000);
  CHECK(std::abs(mean_of(s1.values) - 1.0) < 0.01);

  auto v2 = dickman::LimitVerdict::dickman(4.0, 0.25, pm1);
  auto s2 = dickman::sample_limit_scaled(v2, 1e-8, RngStream(3, 1), 200000);
  CHECK(std::abs(var_of(s2.values) - 0.125) < 0.005);
  CHECK(std::abs(mean_of(s2.values) - 1.0) < 0.01);

  CHECK_THROWS_AS(dickman::sample_limit_scaled(
                      dickman::LimitVerdict::degenerate(1.0), 1e-8,
                      RngStream(3, 2), 10),
                  dickman::capability_error);
}

TEST_CASE("scaling law through the mixing atoms") {
  // c * D_theta realized as mixing atoms at c: mean c * theta
  auto tripled = MixingLaw::finite_discrete({0.75}, {1.0});
  auto b = sample_gd(DickmanParams(1.0), tripled, 1e-8, RngStream(8, 0),
                     400000);
  CHECK(std::abs(mean_of(b.values) - 0.75) < 0.006);
}

TEST_CASE("sampler guard rails") {
  auto pm1 = MixingLaw::point_mass_one();
  CHECK_THROWS_AS(sample_gd(DickmanParams(1.0), pm1, 0.0, RngStream(1, 0), 10),
                  dickman::domain_error);
  CHECK_THROWS_AS(sample_gd(DickmanParams(1.0), pm1, 0.01, RngStream(1, 0), 10),
                  dickman::domain_error);
  CHECK_THROWS_AS(sample_gd(DickmanParams(1.0), pm1, 1e-8, RngStream(1, 0), 0),
                  dickman::domain_error);
  CHECK_THROWS_AS(dickman::fixed_point_check(DickmanParams(1.0), pm1, 100,
                                             RngStream(1, 0)),
                  dickman::domain_error);
}
