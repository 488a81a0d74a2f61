#pragma once

#include <cstdint>
#include <vector>

namespace dickman {

// lpf[m] = largest prime factor of m for 2 <= m <= n; lpf[1] = 1, lpf[0] = 0.
// Linear sieve plus an in-place fold, O(n) time, one uint32 per integer.
std::vector<std::uint32_t> largest_prime_factor_sieve(std::uint64_t n);

struct SmoothCount {
  std::uint64_t n_limit = 0;  // N
  double s = 0.0;
  std::uint64_t y = 0;       // floor(N^(1/s))
  std::uint64_t psi = 0;     // Psi(N, y) = #{m <= N : lpf(m) <= y}, incl. 1
  double ratio = 0.0;        // psi / N
  double rho_s = 0.0;        // Dickman rho(s)
  double abs_error = 0.0;    // |ratio - rho_s|
};

// Empirical check of Psi(N, N^(1/s)) ~ N * rho(s).
SmoothCount dickman_check(std::uint64_t n_limit, double s);

}  // namespace dickman
