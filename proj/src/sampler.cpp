#include "dickman/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "dickman/errors.hpp"
#include "dickman/simulator.hpp"

namespace dickman {

SampleBatch sample_gd(const DickmanParams& params, const MixingLaw& mixing,
                      double truncation_tol, RngStream rng,
                      std::size_t count) {
  if (!(truncation_tol > 0.0 && truncation_tol <= 1e-3))
    throw domain_error("sample_gd: truncation_tol must be in (0, 1e-3]");
  if (count == 0) throw domain_error("sample_gd: count must be >= 1");

  SampleBatch batch;
  batch.theta = params.theta;
  batch.mixing = mixing;
  batch.truncation_tol = truncation_tol;
  batch.values.reserve(count);

  const double inv_theta = 1.0 / params.theta;
  const double log_tol = std::log(truncation_tol);
  double worst_pref = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    // D = X_1 U_1^{1/theta} + X_2 (U_1 U_2)^{1/theta} + ...; stop before the
    // first term whose prefactor drops under tol
    double logp = std::log(rng.u01_pos()) * inv_theta;
    double d = 0.0;
    while (logp >= log_tol) {
      d += mixing.sample(rng) * std::exp(logp);
      logp += std::log(rng.u01_pos()) * inv_theta;
    }
    worst_pref = std::max(worst_pref, std::exp(logp));
    batch.values.push_back(d);
  }
  batch.bias_bound = worst_pref * mixing.mean() * (params.theta + 1.0);
  return batch;
}

double fixed_point_check(const DickmanParams& params, const MixingLaw& mixing,
                         std::size_t replicates, RngStream rng,
                         double exponent) {
  if (replicates < 10000)
    throw domain_error("fixed_point_check: replicates must be >= 10^4");
  const double e = (exponent == 0.0) ? 1.0 / params.theta : exponent;

  auto inner = sample_gd(params, mixing, 1e-8, rng.substream(0), replicates);
  auto fresh = sample_gd(params, mixing, 1e-8, rng.substream(1), replicates);

  // map the inner batch through one fixed-point step U^e (X + D)
  RngStream aux = rng.substream(2);
  std::vector<double> mapped;
  mapped.reserve(replicates);
  for (double d : inner.values) {
    double u = aux.u01_pos();
    double x = mixing.sample(aux);
    mapped.push_back(std::pow(u, e) * (x + d));
  }
  return two_sample_ks(std::move(mapped), std::move(fresh.values));
}

SampleBatch sample_limit_scaled(const LimitVerdict& verdict,
                                double truncation_tol, RngStream rng,
                                std::size_t count) {
  if (!verdict.is_dickman())
    throw capability_error(
        "sample_limit_scaled: only dickman verdicts have a sampleable limit");
  auto batch = sample_gd(DickmanParams(verdict.theta()), verdict.mixing(),
                         truncation_tol, std::move(rng), count);
  const double L = verdict.scale();
  for (double& v : batch.values) v *= L;
  batch.bias_bound *= L;
  return batch;
}

}  // namespace dickman
