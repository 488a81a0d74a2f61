#include "dickman/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>

#include "dickman/errors.hpp"
#include "dickman/parallel.hpp"
#include "dickman/sampler.hpp"

namespace dickman {

// ---------------------------------------------------------------- metrics

double ks_distance(std::vector<double> sample,
                   const std::function<double(double)>& cdf) {
  if (sample.empty()) throw domain_error("ks_distance: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = (double)sample.size();
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max(d, f - (double)i / n);
    d = std::max(d, (double)(i + 1) / n - f);
  }
  return d;
}

double two_sample_ks(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw domain_error("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = (double)a.size(), nb = (double)b.size();
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs((double)i / na - (double)j / nb));
  }
  return d;
}

namespace {

constexpr std::size_t kQuantileGrid = 10000;

double order_stat(const std::vector<double>& sorted, double q) {
  auto idx = (std::size_t)(q * (double)sorted.size());
  idx = std::min(idx, sorted.size() - 1);
  return sorted[idx];
}

}  // namespace

double wasserstein1(std::vector<double> sample,
                    const std::function<double(double)>& quantile) {
  if (sample.empty()) throw domain_error("wasserstein1: empty sample");
  std::sort(sample.begin(), sample.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < kQuantileGrid; ++i) {
    double q = ((double)i + 0.5) / (double)kQuantileGrid;
    acc += std::abs(order_stat(sample, q) - quantile(q));
  }
  return acc / (double)kQuantileGrid;
}

double wasserstein1_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw domain_error("wasserstein1_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < kQuantileGrid; ++i) {
    double q = ((double)i + 0.5) / (double)kQuantileGrid;
    acc += std::abs(order_stat(a, q) - order_stat(b, q));
  }
  return acc / (double)kQuantileGrid;
}

// ----------------------------------------------------- Bernoulli skipping

std::optional<std::uint64_t> next_success(const PSchedule& p,
                                          std::uint64_t from_k,
                                          std::uint64_t n_max,
                                          RngStream& rng) {
  constexpr std::uint64_t kDirectCutoff = 10000;
  std::uint64_t k = from_k + 1;

  // direct per-index draws while p may still be non-monotone
  std::uint64_t head_end = std::min(n_max, kDirectCutoff);
  for (; k <= head_end; ++k)
    if (rng.bernoulli(p.eval((double)k))) return k;
  if (k > n_max) return std::nullopt;

  // geometric skipping under a monotone envelope: propose the next hit of a
  // Bernoulli(env) sequence, accept with p(j)/env <= 1
  std::uint64_t anchor = p.monotone_tail_start(k - 1);
  while (k <= n_max) {
    if (k < anchor) {  // between the direct head and the provable tail
      if (rng.bernoulli(p.eval((double)k))) return k;
      ++k;
      continue;
    }
    double env = p.eval((double)k);
    if (env >= 1.0) return k;  // clamped region: certain success
    // G ~ Geometric(env): number of extra trials past k-1
    double u = rng.u01_pos();
    double g = std::floor(std::log(u) / std::log1p(-env));
    std::uint64_t jump =
        g >= (double)n_max ? n_max : (std::uint64_t)g;  // saturate
    std::uint64_t j = k + jump > n_max ? n_max + 1 : k + jump;
    if (j > n_max) return std::nullopt;
    if (rng.u01() * env <= p.eval((double)j)) return j;
    k = j + 1;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- models

SimModel SimModel::deterministic_x(MuSchedule mu, PSchedule p) {
  SimModel m;
  m.kind_ = Kind::deterministic_x;
  m.mu_ = std::move(mu);
  m.p_ = std::move(p);
  return m;
}

SimModel SimModel::subset_uniform(SubsetScheme scheme) {
  SimModel m;
  m.kind_ = Kind::subset_uniform;
  m.scheme_ = std::move(scheme);
  return m;
}

SimModel SimModel::truncated_poisson(double theta0) {
  if (!(std::isfinite(theta0) && theta0 > 0.0))
    throw domain_error("SimModel: theta0 must be finite and > 0");
  SimModel m;
  m.kind_ = Kind::truncated_poisson;
  m.theta0_ = theta0;
  return m;
}

LimitVerdict SimModel::derive_verdict() const {
  switch (kind_) {
    case Kind::deterministic_x:
      return classify_theorem2(*mu_, *p_);
    case Kind::subset_uniform: {
      auto in = scheme_to_limit_inputs(*scheme_);
      return classify_shuffle(in.mu, in.set_size, in.mixing);
    }
    case Kind::truncated_poisson:
      // mu_k = theta0/(1 - e^{-theta0/k}) ~ k, X_k/mu_k -> 1, M_n = n theta0
      return LimitVerdict::dickman(theta0_, 1.0 / theta0_,
                                   MixingLaw::point_mass_one());
  }
  return LimitVerdict::invalid("unreachable");
}

// ------------------------------------------------------------- simulate

namespace {

// one W_n draw for the schedule-driven model
double draw_deterministic(const MuSchedule& mu, const PSchedule& p,
                          std::uint64_t n, double m_n, RngStream& rng) {
  double acc = 0.0;
  std::uint64_t k = 0;
  while (auto hit = next_success(p, k, n, rng)) {
    k = *hit;
    acc += mu.eval((double)k);
  }
  return acc / m_n;
}

// one W_n draw for a subset scheme, via the shared I_n sampler
double draw_subset(const SubsetScheme& scheme, std::uint64_t n, double m_n,
                   RngStream& rng) {
  return (double)draw_inversions(scheme, n, rng) / m_n;
}

// zero-truncated Poisson(lambda) via inversion on the shifted series;
// lambda <= theta0 stays small, so the loop is short
std::uint64_t draw_ztp(double lambda, RngStream& rng) {
  double u = rng.u01_pos();
  double denom = -std::expm1(-lambda);  // P(Y > 0)
  double term = lambda * std::exp(-lambda) / denom;
  double cum = term;
  std::uint64_t y = 1;
  while (u > cum && y < 400) {
    ++y;
    term *= lambda / (double)y;
    cum += term;
  }
  return y;
}

double draw_truncated_poisson(double theta0, std::uint64_t n, double m_n,
                              RngStream& rng) {
  // p_k = 1 - e^{-theta0/k} is decreasing in k from k = 1
  double acc = 0.0;
  std::uint64_t k = 0;
  while (k < n) {
    // skip to the next success under the exact envelope p(k+1)
    double env = -std::expm1(-theta0 / (double)(k + 1));
    double u = rng.u01_pos();
    double g = std::floor(std::log(u) / std::log1p(-env));
    std::uint64_t j =
        g >= (double)n ? n + 1 : k + 1 + (std::uint64_t)g;
    if (j > n) break;
    double pj = -std::expm1(-theta0 / (double)j);
    if (rng.u01() * env <= pj) {
      acc += (double)j * (double)draw_ztp(theta0 / (double)j, rng);
      k = j;
    } else {
      k = j;  // rejected proposal still advances past j
    }
  }
  return acc / m_n;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
  return simulate(config, config.model.derive_verdict());
}

SimResult simulate(const SimConfig& config, const LimitVerdict& verdict) {
  const SimModel& model = config.model;
  if (config.n_grid.empty())
    throw domain_error("simulate: n_grid must be nonempty");
  for (std::size_t i = 0; i + 1 < config.n_grid.size(); ++i)
    if (config.n_grid[i] >= config.n_grid[i + 1])
      throw domain_error("simulate: n_grid must be strictly increasing");
  if (config.n_grid.front() < 1)
    throw domain_error("simulate: n values must be >= 1");
  if (config.replicates < 100)
    throw domain_error("simulate: replicates must be >= 100");
  if (verdict.kind() == LimitVerdict::Kind::invalid)
    throw domain_error("simulate: verdict must not be invalid");

  // reference CDF/quantile for the distance columns
  std::function<double(double)> ref_cdf, ref_quantile;
  std::shared_ptr<const DensityTable> table;
  std::vector<double> ref_sorted;
  if (verdict.is_dickman()) {
    const double L = verdict.scale();
    if (verdict.mixing().is_point_mass_one()) {
      table = shared_table(DickmanParams(verdict.theta()));
      ref_cdf = [table, L](double x) { return table->cdf(x / L); };
      ref_quantile = [table, L](double q) { return L * table->quantile(q); };
    } else {
      auto batch =
          sample_limit_scaled(verdict, config.sampler_tol,
                              RngStream(config.master_seed, 0),
                              config.reference_size);
      ref_sorted = std::move(batch.values);
      std::sort(ref_sorted.begin(), ref_sorted.end());
      auto ref = std::make_shared<std::vector<double>>(std::move(ref_sorted));
      ref_cdf = [ref](double x) {
        auto it = std::upper_bound(ref->begin(), ref->end(), x);
        return (double)(it - ref->begin()) / (double)ref->size();
      };
      ref_quantile = [ref](double q) {
        auto idx = (std::size_t)(q * (double)ref->size());
        return (*ref)[std::min(idx, ref->size() - 1)];
      };
    }
  } else {
    const double c = verdict.c();
    ref_cdf = [c](double x) { return x < c ? 0.0 : 1.0; };
    ref_quantile = [c](double) { return c; };
  }

  SimResult result;
  result.verdict = verdict;
  for (std::size_t gi = 0; gi < config.n_grid.size(); ++gi) {
    const std::uint64_t n = config.n_grid[gi];
    SimPoint pt;
    pt.n = n;

    double m_n = 0.0, model_var_num = 0.0;
    bool have_model_var = false;
    switch (model.kind()) {
      case SimModel::Kind::deterministic_x: {
        have_model_var = true;
        for (std::uint64_t k = 1; k <= n; ++k) {
          double pk = model.p().eval((double)k);
          double muk = model.mu().eval((double)k);
          m_n += pk * muk;
          model_var_num += pk * (1.0 - pk) * muk * muk;
        }
        break;
      }
      case SimModel::Kind::subset_uniform: {
        for (std::uint64_t k = 2; k <= n; ++k) {
          std::uint64_t sz = model.scheme().set_size(k);
          if (sz == 0) continue;
          m_n += ((double)sz / (double)k) * model.scheme().set_mean(k);
        }
        break;
      }
      case SimModel::Kind::truncated_poisson:
        m_n = (double)n * model.theta0();
        break;
    }
    if (!(m_n > 0.0))
      throw domain_error("simulate: M_n vanished; schedule is trivial");
    pt.m_n = m_n;

    pt.samples.assign(config.replicates, 0.0);
    parallel_for(config.replicates, config.workers, [&](std::size_t rep) {
      RngStream rng(config.master_seed, 1 + gi, (std::uint64_t)rep);
      double w = 0.0;
      switch (model.kind()) {
        case SimModel::Kind::deterministic_x:
          w = draw_deterministic(model.mu(), model.p(), n, m_n, rng);
          break;
        case SimModel::Kind::subset_uniform:
          w = draw_subset(model.scheme(), n, m_n, rng);
          break;
        case SimModel::Kind::truncated_poisson:
          w = draw_truncated_poisson(model.theta0(), n, m_n, rng);
          break;
      }
      pt.samples[rep] = w;
    });

    double s = 0.0;
    for (double v : pt.samples) s += v;
    pt.mean = s / (double)pt.samples.size();
    double ss = 0.0;
    for (double v : pt.samples) ss += (v - pt.mean) * (v - pt.mean);
    pt.variance = ss / ((double)pt.samples.size() - 1.0);
    pt.model_variance = have_model_var
                            ? model_var_num / (m_n * m_n)
                            : std::numeric_limits<double>::quiet_NaN();
    pt.ks = ks_distance(pt.samples, ref_cdf);
    pt.w1 = wasserstein1(pt.samples, ref_quantile);
    result.points.push_back(std::move(pt));
  }
  return result;
}

}  // namespace dickman
