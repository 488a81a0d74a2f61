#include "dickman/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "dickman/errors.hpp"

namespace dickman {

LimitVerdict LimitVerdict::dickman(double theta, double L, MixingLaw mixing) {
  if (!(std::isfinite(theta) && theta > 0.0))
    throw domain_error("LimitVerdict: theta must be finite and > 0");
  if (!(std::isfinite(L) && L > 0.0 && L <= (1.0 + 1e-12) / theta))
    throw domain_error("LimitVerdict: scale L must lie in (0, 1/theta]");
  LimitVerdict v;
  v.kind_ = Kind::dickman;
  v.theta_ = theta;
  v.scale_ = L;
  v.mixing_ = std::move(mixing);
  return v;
}

LimitVerdict LimitVerdict::degenerate(double c) {
  if (!(c >= 0.0 && c <= 1.0))
    throw domain_error("LimitVerdict: degenerate constant must be in [0,1]");
  LimitVerdict v;
  v.kind_ = Kind::degenerate;
  v.c_ = c;
  return v;
}

LimitVerdict LimitVerdict::invalid(std::string reason) {
  LimitVerdict v;
  v.kind_ = Kind::invalid;
  v.reason_ = std::move(reason);
  return v;
}

double LimitVerdict::theta() const {
  if (kind_ != Kind::dickman)
    throw domain_error("LimitVerdict: theta is defined for dickman verdicts");
  return theta_;
}

double LimitVerdict::scale() const {
  if (kind_ != Kind::dickman)
    throw domain_error("LimitVerdict: scale is defined for dickman verdicts");
  return scale_;
}

const MixingLaw& LimitVerdict::mixing() const {
  if (kind_ != Kind::dickman)
    throw domain_error("LimitVerdict: mixing is defined for dickman verdicts");
  return mixing_;
}

double LimitVerdict::c() const {
  if (kind_ != Kind::degenerate)
    throw domain_error("LimitVerdict: c is defined for degenerate verdicts");
  return c_;
}

std::string LimitVerdict::describe() const {
  switch (kind_) {
    case Kind::dickman:
      return "dickman(theta=" + std::to_string(theta_) +
             ", L=" + std::to_string(scale_) + ", X=" + mixing_.describe() +
             ")";
    case Kind::degenerate:
      return "degenerate(c=" + std::to_string(c_) + ")";
    case Kind::invalid:
      return "invalid(" + reason_ + ")";
  }
  return "invalid";
}

KappaIndices kappa_indices(const MuSchedule& mu, const PSchedule& p) {
  KappaIndices k;
  const auto& a = mu.exponents();
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0.0) {
      k.kappa_mu = (int)j;
      break;
    }
  const auto& b = p.exponents();
  for (std::size_t j = 0; j < b.size(); ++j)
    if (b[j] != 1.0) {
      k.kappa_p = (int)j;
      break;
    }
  return k;
}

LimitVerdict classify_theorem2(const MuSchedule& mu, const PSchedule& p) {
  const auto& a = mu.exponents();
  const auto& b = p.exponents();
  const int Jmu = mu.depth();
  const int Jp = p.depth();

  if (Jp >= 1 && b[(std::size_t)Jp] == 0.0)
    return LimitVerdict::invalid(
        "p has a trailing zero exponent (b_{J_p} must be nonzero)");

  auto nontriv = validate_nontriv(mu, p);
  if (!nontriv.ok()) {
    std::string why = !nontriv.p_sum_diverges
                          ? "sum of p_k converges (finitely many successes)"
                          : "M_n stays bounded";
    return LimitVerdict::invalid(std::move(why));
  }

  bool box = Jp <= Jmu;
  for (int j = 0; box && j <= Jp; ++j)
    if (b[(std::size_t)j] != 1.0) box = false;
  for (int j = 0; box && j < Jp; ++j)
    if (a[(std::size_t)j] != 0.0) box = false;
  if (box && a[(std::size_t)Jp] > 0.0) {
    double theta = p.c() / a[(std::size_t)Jp];
    return LimitVerdict::dickman(theta, 1.0 / theta,
                                 MixingLaw::point_mass_one());
  }

  // degenerate constant from the kappa rule
  auto kap = kappa_indices(mu, p);
  bool zero = kap.kappa_mu.has_value() &&
              a[(std::size_t)*kap.kappa_mu] > 0.0 &&
              ((!kap.kappa_p.has_value() && *kap.kappa_mu < Jp) ||
               (kap.kappa_p.has_value() && *kap.kappa_mu < *kap.kappa_p));
  return LimitVerdict::degenerate(zero ? 0.0 : 1.0);
}

LimitVerdict classify_shuffle(const MuSchedule& mu, SetSize set_size,
                              const MixingLaw& mixing) {
  const double a0 = mu.exponents()[0];
  if (set_size.bounded && a0 > 0.0) {
    if (set_size.value < 1)
      return LimitVerdict::invalid("bounded set size must be >= 1");
    double theta = (double)set_size.value / a0;
    return LimitVerdict::dickman(theta, 1.0 / theta, mixing);
  }

  // decade maxima of r_n = mu(n) / sum_{k<=n} mu(k)/k over n <= 10^6;
  // the sufficient conditions are asymptotic, so test growth between decades
  double cum = 0.0;
  double mx[6] = {0, 0, 0, 0, 0, 0};
  std::uint64_t edge = 10;
  int dec = 0;
  for (std::uint64_t k = 1; k <= 1000000; ++k) {
    double m = mu.eval((double)k);
    cum += m / (double)k;
    if (k > edge) {
      ++dec;
      edge *= 10;
    }
    if (k > 1) mx[dec] = std::max(mx[dec], m / cum);
  }

  bool ratio_bounded = mx[5] <= 1.01 * mx[4];
  bool ratio_vanishes = mx[5] <= 0.95 * mx[4] && mx[5] <= 0.5 * mx[1];
  if ((!set_size.bounded && ratio_bounded) || ratio_vanishes)
    return LimitVerdict::degenerate(1.0);
  return LimitVerdict::invalid(
      "conditions of the shuffling limit theorem not established on the "
      "10^6 grid (mu_n / sum mu_k/k neither bounded nor vanishing)");
}

}  // namespace dickman
