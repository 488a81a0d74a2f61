#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dickman {

// Iterated-logarithm schedule
//   mu(x) = c * x^{a0} * prod_{j=1..J} (log^(j) x)^{a_j},
// where log^(j) is the j-fold iterated natural log. Evaluation clamps the
// argument to k0, the smallest integer where every iterated log in the
// product is >= 1, so small-k values are well defined without affecting
// asymptotics.
class MuSchedule {
 public:
  MuSchedule(double c, std::vector<double> exponents);

  double c() const { return c_; }
  const std::vector<double>& exponents() const { return a_; }
  int depth() const { return static_cast<int>(a_.size()) - 1; }  // J
  std::uint64_t k0() const { return k0_; }

  double eval(double k) const;       // mu(max(k, k0))
  double increment(double k) const;  // mu'(max(k, k0))

 private:
  double c_;
  std::vector<double> a_;
  std::uint64_t k0_;
};

// Success-probability schedule
//   p(x) = min(1, c / (x^{b0} * prod_{j=1..J} (log^(j) x)^{b_j})),
// clamped at k0 like MuSchedule.
class PSchedule {
 public:
  PSchedule(double c, std::vector<double> exponents);

  double c() const { return c_; }
  const std::vector<double>& exponents() const { return b_; }
  int depth() const { return static_cast<int>(b_.size()) - 1; }  // J
  std::uint64_t k0() const { return k0_; }

  double eval(double k) const;  // in (0, 1]

  // Smallest index >= lo from which p is guaranteed nonincreasing, so
  // p(start) bounds p on [start, inf). Used to anchor skip-sampling
  // envelopes.
  std::uint64_t monotone_tail_start(std::uint64_t lo) const;

 private:
  double c_;
  std::vector<double> b_;
  std::uint64_t k0_;
};

inline double eval_mu(const MuSchedule& mu, double k) { return mu.eval(k); }
inline double eval_p(const PSchedule& p, double k) { return p.eval(k); }
inline double mu_increment(const MuSchedule& mu, double k) { return mu.increment(k); }

// Does sum_k k^{d0} * prod_j (log^(j) k)^{d_j} diverge? Bertrand-scale test:
// scan d for the first entry != -1; the sum diverges iff that entry is > -1,
// or all entries equal -1. Comparisons are exact.
bool series_diverges(const std::vector<double>& d);

struct NontrivReport {
  bool p_sum_diverges = false;   // sum p_k = inf (infinitely many successes)
  bool mass_diverges = false;    // M_n -> inf
  bool ok() const { return p_sum_diverges && mass_diverges; }
};

NontrivReport validate_nontriv(const MuSchedule& mu, const PSchedule& p);

// M_n = sum_{k<=n} p_k mu_k for n = 0..n_max (entry 0 is 0).
using PrefixMass = std::vector<double>;
PrefixMass prefix_mass(const MuSchedule& mu, const PSchedule& p,
                       std::uint64_t n_max);

}  // namespace dickman
