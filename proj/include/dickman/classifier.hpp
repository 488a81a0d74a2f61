#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mixing.hpp"
#include "schedules.hpp"

namespace dickman {

// Limit classification of W_n = (1/M_n) sum_{k<=n} B_k X_k mu_k:
//  - dickman:    W_n -> GD^(X)(theta) scaled by L (theta L <= 1)
//  - degenerate: W_n -> point mass at c in {0, 1}
//  - invalid:    hypotheses fail; reason says which
class LimitVerdict {
 public:
  enum class Kind { dickman, degenerate, invalid };

  static LimitVerdict dickman(double theta, double L, MixingLaw mixing);
  static LimitVerdict degenerate(double c);
  static LimitVerdict invalid(std::string reason);

  Kind kind() const { return kind_; }
  bool is_dickman() const { return kind_ == Kind::dickman; }
  double theta() const;             // dickman only
  double scale() const;             // L, dickman only
  const MixingLaw& mixing() const;  // dickman only
  double c() const;                 // degenerate only
  const std::string& reason() const { return reason_; }
  std::string describe() const;

 private:
  LimitVerdict() = default;
  Kind kind_ = Kind::invalid;
  double theta_ = 0.0;
  double scale_ = 0.0;
  double c_ = 0.0;
  MixingLaw mixing_ = MixingLaw::point_mass_one();
  std::string reason_;
};

// First index j with a_j != 0 (kappa_mu), and first j <= J_p with b_j != 1
// (kappa_p); nullopt when no such index exists. Exact comparisons.
struct KappaIndices {
  std::optional<int> kappa_mu;
  std::optional<int> kappa_p;
};
KappaIndices kappa_indices(const MuSchedule& mu, const PSchedule& p);

// Decision procedure for schedule-driven sums (X_k == 1).
LimitVerdict classify_theorem2(const MuSchedule& mu, const PSchedule& p);

// |E_k| for card-shuffling subset schemes: either a finite limit N or
// unbounded growth.
struct SetSize {
  bool bounded = true;
  std::uint64_t value = 1;  // N when bounded
  static SetSize of(std::uint64_t n) { return SetSize{true, n}; }
  static SetSize unbounded() { return SetSize{false, 0}; }
};

// Classification for shuffle-type inputs: mu is the asymptotic form of the
// set means, set_size the limiting |E_k|, mixing the within-set location law.
// Finite N with mu growing at a positive power gives GD^(X)(N/a0) scaled by
// a0/N; otherwise degenerate or invalid by the ratio test mu(n)/sum mu(k)/k.
LimitVerdict classify_shuffle(const MuSchedule& mu, SetSize set_size,
                              const MixingLaw& mixing);

}  // namespace dickman
