#pragma once

#include <cstdint>
#include <vector>

#include "classifier.hpp"
#include "mixing.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace dickman {

// Draws from the multiplicative fixed-point series
//   D = sum_{i>=1} X_i (U_1 ... U_i)^{1/theta},
// truncated at the first index whose prefactor drops below truncation_tol.
struct SampleBatch {
  std::vector<double> values;
  double theta = 1.0;
  MixingLaw mixing = MixingLaw::point_mass_one();
  double truncation_tol = 0.0;
  // Max over the batch of the pathwise truncated-tail mean bound
  // prefactor_at_stop * E[X] * (theta + 1); always < tol * E[X] * (theta+1).
  double bias_bound = 0.0;
};

SampleBatch sample_gd(const DickmanParams& params, const MixingLaw& mixing,
                      double truncation_tol, RngStream rng, std::size_t count);

// One-step distributional identity check: two-sample Kolmogorov-Smirnov
// distance between a fresh batch D' and the transform U^e (X + D) built from
// an independent batch. `exponent` overrides e = 1/theta for negative
// controls; pass 0 to use the correct exponent.
double fixed_point_check(const DickmanParams& params, const MixingLaw& mixing,
                         std::size_t replicates, RngStream rng,
                         double exponent = 0.0);

// Samples L * D for a Dickman limit verdict: the scaled limit law a simulated
// W_n should approach. Throws capability_error for non-Dickman verdicts.
SampleBatch sample_limit_scaled(const LimitVerdict& verdict,
                                double truncation_tol, RngStream rng,
                                std::size_t count);

}  // namespace dickman
