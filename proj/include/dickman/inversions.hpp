#pragma once

#include <cstdint>
#include <vector>

#include "classifier.hpp"
#include "mixing.hpp"
#include "rng.hpp"

namespace dickman {

// Riffle-insertion subset scheme: when card k is inserted, with probability
// |E_k|/k it lands so that a uniformly chosen j in E_k cards end up to its
// right (creating exactly j new inversions, all permanent), otherwise it
// lands at the right end (j = 0). E_k is a subset of {1..k-1}.
class SubsetScheme {
 public:
  enum class Kind { top, singleton, full, last_n, ratio, custom };

  static SubsetScheme top();        // E_k = {k-1}
  static SubsetScheme singleton();  // E_k = {1}
  static SubsetScheme full();       // E_k = {1..k-1}
  static SubsetScheme last_n(std::uint64_t n);  // E_k = {k-N..k-1} clipped
  // E_k = { min(floor(r_i k), k-1) : r_i in ratios }, duplicates merged,
  // values < 1 dropped. Ratios in (0,1], deduplicated.
  static SubsetScheme ratio(std::vector<double> ratios);
  // Explicit sets; sets[k-1] is E_k. Only valid for n <= sets.size().
  static SubsetScheme custom(std::vector<std::vector<std::uint64_t>> sets);

  Kind kind() const { return kind_; }
  std::uint64_t last_n_value() const { return n_; }
  const std::vector<double>& ratios() const { return ratios_; }

  std::uint64_t set_size(std::uint64_t k) const;  // |E_k|
  double set_mean(std::uint64_t k) const;         // mean of E_k, 0 if empty
  // The idx-th element of E_k, idx < set_size(k), ascending order.
  std::uint64_t element(std::uint64_t k, std::uint64_t idx) const;
  std::uint64_t max_k() const;  // custom only: largest supported k

 private:
  SubsetScheme() = default;
  Kind kind_ = Kind::full;
  std::uint64_t n_ = 0;
  std::vector<double> ratios_;
  std::vector<std::vector<std::uint64_t>> sets_;
};

struct InversionRun {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> samples;  // inversion count per replicate
  double mean_model = 0.0;             // M_n = sum |E_k|/k * mean(E_k)
};

InversionRun simulate_inversions(const SubsetScheme& scheme, std::uint64_t n,
                                 std::size_t replicates, RngStream rng,
                                 unsigned workers = 1);

// Exact model sum M_n for the scheme.
double inversion_model_mean(const SubsetScheme& scheme, std::uint64_t n);

// One I_n draw through the B_k X_k representation: geometric skipping when
// |E_k| has a stable finite bound, dense per-k sweep otherwise.
std::uint64_t draw_inversions(const SubsetScheme& scheme, std::uint64_t n,
                              RngStream& rng);

// Runs one shuffle twice over the same draws: once accumulating the sum of
// j's along the insertion path, once materializing the permutation and
// merge-counting its inversions. The two counts must match exactly; any
// divergence is a bug in one of them.
struct OracleCounts {
  std::vector<std::uint32_t> permutation;  // row of cards, left to right
  std::uint64_t running_sum = 0;
  std::uint64_t merge_count = 0;
};
OracleCounts shuffle_oracle(const SubsetScheme& scheme, std::uint64_t n,
                            RngStream rng);

// Asymptotic inputs for classify_shuffle.
struct LimitInputs {
  MuSchedule mu;
  SetSize set_size;
  MixingLaw mixing;
};
LimitInputs scheme_to_limit_inputs(const SubsetScheme& scheme);

}  // namespace dickman
