#include "dickman/inversions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dickman/errors.hpp"
#include "dickman/parallel.hpp"
#include "dickman/schedules.hpp"

namespace dickman {

namespace {

// Fenwick tree over n slots, each holding one free unit, with binary-lifted
// rank search. Used to materialize insert-at-rank sequences in reverse:
// when cards are placed in order n..1, the free slots at step k are exactly
// the final positions of cards 1..k, in left-to-right order.
class SlotTree {
 public:
  explicit SlotTree(std::size_t n) : n_(n), tree_(n + 1, 0) {
    for (std::size_t i = 1; i <= n; ++i) {
      tree_[i] += 1;
      const std::size_t parent = i + (i & (~i + 1));
      if (parent <= n) tree_[parent] += tree_[i];
    }
    while ((std::size_t{1} << (log_ + 1)) <= n) ++log_;
  }

  // Smallest 0-based slot whose free-prefix count reaches rank (1-based);
  // marks it occupied.
  std::size_t take(std::uint64_t rank) {
    std::size_t pos = 0;
    for (int b = log_; b >= 0; --b) {
      const std::size_t next = pos + (std::size_t{1} << b);
      if (next <= n_ && tree_[next] < rank) {
        pos = next;
        rank -= tree_[next];
      }
    }
    for (std::size_t i = pos + 1; i <= n_; i += i & (~i + 1)) --tree_[i];
    return pos;
  }

 private:
  std::size_t n_;
  int log_ = 0;
  std::vector<std::uint32_t> tree_;
};

std::uint64_t merge_count(std::vector<std::uint32_t> v) {
  std::vector<std::uint32_t> buf(v.size());
  std::uint64_t count = 0;
  for (std::size_t w = 1; w < v.size(); w *= 2) {
    for (std::size_t lo = 0; lo + w < v.size(); lo += 2 * w) {
      const std::size_t mid = lo + w;
      const std::size_t hi = std::min(lo + 2 * w, v.size());
      std::size_t i = lo, j = mid, o = lo;
      while (i < mid && j < hi) {
        if (v[i] <= v[j]) {
          buf[o++] = v[i++];
        } else {
          count += mid - i;
          buf[o++] = v[j++];
        }
      }
      while (i < mid) buf[o++] = v[i++];
      while (j < hi) buf[o++] = v[j++];
      std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    }
  }
  return count;
}

// Upper bound on |E_k| valid for every k, when one exists. Schemes with a
// stable finite size admit the envelope |E_k|/k <= bound/k, which drives the
// sparse sampling path; Full and Custom are drawn densely.
std::optional<std::uint64_t> stable_bound(const SubsetScheme& s) {
  switch (s.kind()) {
    case SubsetScheme::Kind::top:
    case SubsetScheme::Kind::singleton:
      return 1;
    case SubsetScheme::Kind::last_n:
      return s.last_n_value();
    case SubsetScheme::Kind::ratio:
      return s.ratios().size();
    default:
      return std::nullopt;
  }
}

void validate_for(const SubsetScheme& s, std::uint64_t n) {
  if (s.kind() != SubsetScheme::Kind::custom) return;
  if (n > s.max_k())
    throw domain_error("custom scheme defines E_k only up to k = " +
                       std::to_string(s.max_k()));
  for (std::uint64_t k = 1; k <= n; ++k) {
    const std::uint64_t size = s.set_size(k);
    if (size == 0) continue;
    const std::uint64_t lo = s.element(k, 0);
    const std::uint64_t hi = s.element(k, size - 1);
    if (k < 2 || lo < 1 || hi > k - 1)
      throw domain_error("custom scheme: E_" + std::to_string(k) +
                         " is not a subset of {1.." + std::to_string(k - 1) +
                         "}");
  }
}

// One step of the B_k X_k representation: with probability |E_k|/k pick a
// uniform element of E_k, otherwise contribute nothing.
inline std::uint64_t step_draw(const SubsetScheme& s, std::uint64_t k,
                               std::uint64_t size, RngStream& rng) {
  const std::uint64_t u = rng.below(k);
  return u < size ? s.element(k, u) : 0;
}

std::uint64_t draw_dense(const SubsetScheme& s, std::uint64_t n,
                         RngStream& rng) {
  std::uint64_t total = 0;
  for (std::uint64_t k = 2; k <= n; ++k) {
    const std::uint64_t size = s.set_size(k);
    if (size > 0) total += step_draw(s, k, size, rng);
  }
  return total;
}

// Thinning under the decreasing envelope env(k) = min(1, bound/k): jump a
// geometric number of steps to the next envelope event, accept it with
// probability p_j / env, and resume past it either way.
std::uint64_t draw_sparse(const SubsetScheme& s, std::uint64_t n,
                          std::uint64_t bound, RngStream& rng) {
  std::uint64_t total = 0;
  std::uint64_t k = 2;
  const double b = static_cast<double>(bound);
  while (k <= n) {
    const double env = b / static_cast<double>(k);
    if (env >= 1.0) {
      const std::uint64_t size = s.set_size(k);
      if (size > 0) total += step_draw(s, k, size, rng);
      ++k;
      continue;
    }
    const double g = std::floor(std::log(rng.u01_pos()) / std::log1p(-env));
    if (g >= static_cast<double>(n)) break;
    const std::uint64_t j = k + static_cast<std::uint64_t>(g);
    if (j > n) break;
    const std::uint64_t size = s.set_size(j);
    if (size > 0) {
      const double pj = static_cast<double>(size) / static_cast<double>(j);
      if (rng.u01() * env < pj) total += s.element(j, rng.below(size));
    }
    k = j + 1;
  }
  return total;
}

}  // namespace

SubsetScheme SubsetScheme::top() {
  SubsetScheme s;
  s.kind_ = Kind::top;
  return s;
}

SubsetScheme SubsetScheme::singleton() {
  SubsetScheme s;
  s.kind_ = Kind::singleton;
  return s;
}

SubsetScheme SubsetScheme::full() {
  SubsetScheme s;
  s.kind_ = Kind::full;
  return s;
}

SubsetScheme SubsetScheme::last_n(std::uint64_t n) {
  if (n == 0) throw domain_error("last_n: window must be positive");
  SubsetScheme s;
  s.kind_ = Kind::last_n;
  s.n_ = n;
  return s;
}

SubsetScheme SubsetScheme::ratio(std::vector<double> ratios) {
  if (ratios.empty()) throw domain_error("ratio: need at least one atom");
  for (double r : ratios)
    if (!(std::isfinite(r) && r > 0.0 && r <= 1.0))
      throw domain_error("ratio: atoms must lie in (0, 1]");
  std::sort(ratios.begin(), ratios.end());
  ratios.erase(std::unique(ratios.begin(), ratios.end()), ratios.end());
  SubsetScheme s;
  s.kind_ = Kind::ratio;
  s.ratios_ = std::move(ratios);
  return s;
}

SubsetScheme SubsetScheme::custom(
    std::vector<std::vector<std::uint64_t>> sets) {
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  SubsetScheme s;
  s.kind_ = Kind::custom;
  s.sets_ = std::move(sets);
  return s;
}

// Atom positions floor(r_i k), clipped to k-1 so the r = 1 atom stays a
// legal insertion point, deduplicated where they coincide at small k.
static void ratio_set(const std::vector<double>& ratios, std::uint64_t k,
                      std::vector<std::uint64_t>& out) {
  out.clear();
  for (double r : ratios) {
    auto a = static_cast<std::uint64_t>(std::floor(r * static_cast<double>(k)));
    if (a > k - 1) a = k - 1;
    if (a >= 1) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::uint64_t SubsetScheme::set_size(std::uint64_t k) const {
  if (k < 2) {
    if (kind_ == Kind::custom && k == 1 && max_k() >= 1) return sets_[0].size();
    return 0;
  }
  switch (kind_) {
    case Kind::top:
    case Kind::singleton:
      return 1;
    case Kind::full:
      return k - 1;
    case Kind::last_n:
      return k - (k > n_ ? k - n_ : 1);
    case Kind::ratio: {
      std::vector<std::uint64_t> tmp;
      ratio_set(ratios_, k, tmp);
      return tmp.size();
    }
    case Kind::custom:
      if (k > sets_.size())
        throw domain_error("custom scheme has no E_k at k = " +
                           std::to_string(k));
      return sets_[k - 1].size();
  }
  return 0;
}

double SubsetScheme::set_mean(std::uint64_t k) const {
  switch (kind_) {
    case Kind::top:
      return k >= 2 ? static_cast<double>(k - 1) : 0.0;
    case Kind::singleton:
      return k >= 2 ? 1.0 : 0.0;
    case Kind::full:
      return k >= 2 ? static_cast<double>(k) / 2.0 : 0.0;
    case Kind::last_n: {
      if (k < 2) return 0.0;
      const std::uint64_t lo = k > n_ ? k - n_ : 1;
      return static_cast<double>(lo + (k - 1)) / 2.0;
    }
    case Kind::ratio:
    case Kind::custom: {
      const std::uint64_t size = set_size(k);
      if (size == 0) return 0.0;
      double sum = 0.0;
      for (std::uint64_t i = 0; i < size; ++i)
        sum += static_cast<double>(element(k, i));
      return sum / static_cast<double>(size);
    }
  }
  return 0.0;
}

std::uint64_t SubsetScheme::element(std::uint64_t k, std::uint64_t idx) const {
  switch (kind_) {
    case Kind::top:
      return k - 1;
    case Kind::singleton:
      return 1;
    case Kind::full:
      return idx + 1;
    case Kind::last_n:
      return (k > n_ ? k - n_ : 1) + idx;
    case Kind::ratio: {
      std::vector<std::uint64_t> tmp;
      ratio_set(ratios_, k, tmp);
      return tmp.at(idx);
    }
    case Kind::custom:
      return sets_.at(k - 1).at(idx);
  }
  return 0;
}

std::uint64_t SubsetScheme::max_k() const { return sets_.size(); }

double inversion_model_mean(const SubsetScheme& scheme, std::uint64_t n) {
  double m = 0.0;
  for (std::uint64_t k = 2; k <= n; ++k) {
    const std::uint64_t size = scheme.set_size(k);
    if (size == 0) continue;
    m += static_cast<double>(size) / static_cast<double>(k) *
         scheme.set_mean(k);
  }
  return m;
}

std::uint64_t draw_inversions(const SubsetScheme& scheme, std::uint64_t n,
                              RngStream& rng) {
  const auto bound = stable_bound(scheme);
  return bound ? draw_sparse(scheme, n, *bound, rng)
               : draw_dense(scheme, n, rng);
}

InversionRun simulate_inversions(const SubsetScheme& scheme, std::uint64_t n,
                                 std::size_t replicates, RngStream rng,
                                 unsigned workers) {
  if (n == 0) throw domain_error("simulate_inversions: n must be positive");
  if (replicates == 0)
    throw domain_error("simulate_inversions: replicates must be positive");
  validate_for(scheme, n);

  InversionRun run;
  run.n = n;
  run.mean_model = inversion_model_mean(scheme, n);
  run.samples.assign(replicates, 0);
  parallel_for(replicates, workers, [&](std::size_t rep) {
    RngStream r = rng.substream(rep);
    run.samples[rep] = draw_inversions(scheme, n, r);
  });
  return run;
}

OracleCounts shuffle_oracle(const SubsetScheme& scheme, std::uint64_t n,
                            RngStream rng) {
  if (n == 0) throw domain_error("shuffle_oracle: n must be positive");
  if (n > 100000)
    throw capability_error("shuffle_oracle supports n <= 100000");
  validate_for(scheme, n);

  // Forward pass through the insertion steps: j[k] cards end up to the right
  // of card k, adding j[k] permanent inversions.
  std::vector<std::uint32_t> right(n + 1, 0);
  std::uint64_t running = 0;
  for (std::uint64_t k = 2; k <= n; ++k) {
    const std::uint64_t size = scheme.set_size(k);
    if (size == 0) continue;
    const std::uint64_t j = step_draw(scheme, k, size, rng);
    right[k] = static_cast<std::uint32_t>(j);
    running += j;
  }

  // Card k occupies the (k - j[k])-th free slot from the left among the
  // final positions of cards 1..k.
  SlotTree slots(n);
  std::vector<std::uint32_t> perm(n, 0);
  for (std::uint64_t k = n; k >= 1; --k) {
    perm[slots.take(k - right[k])] = static_cast<std::uint32_t>(k);
    if (k == 1) break;
  }

  OracleCounts oc;
  oc.running_sum = running;
  oc.merge_count = merge_count(perm);
  oc.permutation = std::move(perm);
  return oc;
}

LimitInputs scheme_to_limit_inputs(const SubsetScheme& scheme) {
  switch (scheme.kind()) {
    case SubsetScheme::Kind::top:
      return {MuSchedule(1.0, {1.0}), SetSize::of(1),
              MixingLaw::point_mass_one()};
    case SubsetScheme::Kind::singleton:
      return {MuSchedule(1.0, {0.0}), SetSize::of(1),
              MixingLaw::point_mass_one()};
    case SubsetScheme::Kind::full:
      // mu_k = k/2 and X_k/mu_k tends to uniform on (0, 2).
      return {MuSchedule(0.5, {1.0}), SetSize::unbounded(),
              MixingLaw::scheme_uniform(2.0)};
    case SubsetScheme::Kind::last_n:
      // Every element of {k-N..k-1} is k(1 + o(1)).
      return {MuSchedule(1.0, {1.0}), SetSize::of(scheme.last_n_value()),
              MixingLaw::point_mass_one()};
    case SubsetScheme::Kind::ratio: {
      const auto& rs = scheme.ratios();
      double rbar = 0.0;
      for (double r : rs) rbar += r;
      rbar /= static_cast<double>(rs.size());
      std::vector<double> atoms;
      atoms.reserve(rs.size());
      for (double r : rs) atoms.push_back(r / rbar);
      const std::vector<double> weights(rs.size(),
                                        1.0 / static_cast<double>(rs.size()));
      return {MuSchedule(rbar, {1.0}), SetSize::of(rs.size()),
              MixingLaw::finite_discrete(atoms, weights)};
    }
    case SubsetScheme::Kind::custom:
      break;
  }
  throw capability_error(
      "scheme_to_limit_inputs: custom schemes have no closed-form limit "
      "inputs; classify empirically");
}

}  // namespace dickman
