#pragma once

#include <string>
#include <vector>

#include "rng.hpp"

namespace dickman {

// Law of the mixing variable X in GD^(X)(theta). Three shapes cover the
// artifact: the point mass at 1 (plain GD), a finite atom list, and the
// uniform law on [0, width] arising from schemes whose sets fill {1..k-1}.
// E[X] <= 1 is enforced throughout.
class MixingLaw {
 public:
  enum class Kind { point_mass_one, finite_discrete, scheme_uniform };

  static MixingLaw point_mass_one();
  static MixingLaw finite_discrete(std::vector<double> atoms,
                                   std::vector<double> weights);
  static MixingLaw scheme_uniform(double width);  // U[0, width], width <= 2

  Kind kind() const { return kind_; }
  bool is_point_mass_one() const { return kind_ == Kind::point_mass_one; }
  double mean() const { return mean_; }
  const std::vector<double>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  double width() const { return width_; }

  double moment(unsigned m) const;   // E[X^m]
  double mgf_neg(double t) const;    // E[exp(-tX)], t >= 0
  double mgf_neg_m1(double t) const; // E[exp(-tX)] - 1, stable for small t
  double sample(RngStream& rng) const;
  std::string describe() const;

 private:
  MixingLaw() = default;
  Kind kind_ = Kind::point_mass_one;
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::vector<double> cum_;  // cumulative weights for sampling
  double width_ = 0.0;
  double mean_ = 1.0;
};

}  // namespace dickman
