#include "dickman/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dickman/errors.hpp"

namespace dickman {

namespace {

void check_shape(double c, const std::vector<double>& e, const char* who) {
  if (!(std::isfinite(c) && c > 0.0))
    throw domain_error(std::string(who) + ": c must be finite and > 0");
  if (e.empty())
    throw domain_error(std::string(who) + ": exponent vector must be nonempty");
  for (double v : e)
    if (!std::isfinite(v))
      throw domain_error(std::string(who) + ": exponents must be finite");
}

// smallest integer k with log^(J) k >= 1, i.e. ceil(exp^(J)(1))
std::uint64_t clamp_threshold(int J, const char* who) {
  double t = 1.0;
  for (int j = 0; j < J; ++j) {
    t = std::exp(t);
    if (t > 9.0e18)
      throw capability_error(std::string(who) +
                             ": iterated-log tower threshold exceeds the "
                             "representable range (deepest supported log is "
                             "log^(3))");
  }
  return (std::uint64_t)std::ceil(t - 1e-12);
}

// log factors L_1..L_J at x (x already clamped so every L_j >= 1)
void iterated_logs(double x, int J, double* L) {
  double t = x;
  for (int j = 0; j < J; ++j) {
    t = std::log(t);
    L[j] = t;
  }
}

constexpr int kMaxDepth = 8;  // construction rejects depth >= 4 anyway

double eval_product(double c, const std::vector<double>& e, double x) {
  const int J = (int)e.size() - 1;
  double L[kMaxDepth];
  iterated_logs(x, J, L);
  double v = c * std::pow(x, e[0]);
  for (int j = 1; j <= J; ++j) v *= std::pow(L[j - 1], e[(std::size_t)j]);
  return v;
}

// derivative of the product at x: (f(x)/x) * (e_0 + sum_j e_j / (L_1..L_j))
double eval_derivative(double c, const std::vector<double>& e, double x) {
  const int J = (int)e.size() - 1;
  double L[kMaxDepth];
  iterated_logs(x, J, L);
  double bracket = e[0], prod = 1.0;
  for (int j = 1; j <= J; ++j) {
    prod *= L[j - 1];
    bracket += e[(std::size_t)j] / prod;
  }
  return eval_product(c, e, x) / x * bracket;
}

}  // namespace

MuSchedule::MuSchedule(double c, std::vector<double> exponents)
    : c_(c), a_(std::move(exponents)) {
  check_shape(c_, a_, "MuSchedule");
  k0_ = clamp_threshold((int)a_.size() - 1, "MuSchedule");
}

double MuSchedule::eval(double k) const {
  return eval_product(c_, a_, std::max(k, (double)k0_));
}

double MuSchedule::increment(double k) const {
  return eval_derivative(c_, a_, std::max(k, (double)k0_));
}

PSchedule::PSchedule(double c, std::vector<double> exponents)
    : c_(c), b_(std::move(exponents)) {
  check_shape(c_, b_, "PSchedule");
  k0_ = clamp_threshold((int)b_.size() - 1, "PSchedule");
}

double PSchedule::eval(double k) const {
  double denom = eval_product(1.0, b_, std::max(k, (double)k0_));
  return std::min(1.0, c_ / denom);
}

std::uint64_t PSchedule::monotone_tail_start(std::uint64_t lo) const {
  const int J = (int)b_.size() - 1;
  lo = std::max(lo, k0_);
  int i0 = -1;
  for (int j = 0; j <= J; ++j)
    if (b_[(std::size_t)j] != 0.0) {
      i0 = j;
      break;
    }
  if (i0 < 0) return lo;  // constant p

  // sign of d/dx log(1/p_raw) is the sign of b_{i0} once the lower-order
  // log factors can no longer flip the bracket e_0 + sum e_j/(L_1..L_j)
  auto dominated = [&](double x) {
    double L[kMaxDepth];
    iterated_logs(x, J, L);
    double lead = std::abs(b_[(std::size_t)i0]);
    double prod0 = 1.0;
    for (int j = 1; j <= i0; ++j) prod0 *= L[j - 1];
    double rest = 0.0, prod = prod0;
    for (int j = i0 + 1; j <= J; ++j) {
      prod *= L[j - 1];
      rest += std::abs(b_[(std::size_t)j]) / (prod / prod0);
    }
    return rest <= lead;
  };

  std::uint64_t k = std::max<std::uint64_t>(lo, 2);
  for (int guard = 0; guard < 63; ++guard) {
    if (dominated((double)k)) {
      if (b_[(std::size_t)i0] > 0.0) return std::max(lo, k);
      // raw p eventually increasing: nonincreasing holds once the clamp
      // pins p at 1, i.e. raw c/denom >= 1 from k on
      if (eval((double)k) >= 1.0) return std::max(lo, k);
    }
    if (k > (std::uint64_t(1) << 62))
      throw capability_error(
          "PSchedule: monotone envelope start exceeds the representable "
          "range");
    k *= 2;
  }
  throw capability_error(
      "PSchedule: monotone envelope start exceeds the representable range");
}

bool series_diverges(const std::vector<double>& d) {
  for (double v : d) {
    if (v != -1.0) return v > -1.0;
  }
  return true;  // pure Bertrand tower sum_k 1/(k log k log log k ...)
}

NontrivReport validate_nontriv(const MuSchedule& mu, const PSchedule& p) {
  NontrivReport rep;
  std::vector<double> neg_b;
  for (double v : p.exponents()) neg_b.push_back(-v);
  rep.p_sum_diverges = series_diverges(neg_b);

  const auto& a = mu.exponents();
  const auto& b = p.exponents();
  std::size_t len = std::max(a.size(), b.size());
  std::vector<double> diff(len, 0.0);
  for (std::size_t j = 0; j < len; ++j) {
    double aj = j < a.size() ? a[j] : 0.0;
    double bj = j < b.size() ? b[j] : 0.0;
    diff[j] = aj - bj;
  }
  rep.mass_diverges = series_diverges(diff);
  return rep;
}

PrefixMass prefix_mass(const MuSchedule& mu, const PSchedule& p,
                       std::uint64_t n_max) {
  if (n_max < 1) throw domain_error("prefix_mass: n_max must be >= 1");
  PrefixMass m((std::size_t)n_max + 1);
  m[0] = 0.0;
  double acc = 0.0;
  for (std::uint64_t k = 1; k <= n_max; ++k) {
    acc += p.eval((double)k) * mu.eval((double)k);
    m[(std::size_t)k] = acc;
  }
  return m;
}

}  // namespace dickman
