#include "dickman/smooth.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dickman/errors.hpp"
#include "dickman/numerics.hpp"

namespace dickman {

namespace {
constexpr std::uint64_t kMaxSieve = 100000000;  // 400 MB of uint32
}

std::vector<std::uint32_t> largest_prime_factor_sieve(std::uint64_t n) {
  if (n == 0) throw domain_error("largest_prime_factor_sieve: n must be >= 1");
  if (n > kMaxSieve)
    throw capability_error("largest_prime_factor_sieve: n = " +
                           std::to_string(n) + " exceeds the 1e8 memory cap");

  // Pass 1: smallest prime factors, each composite marked exactly once.
  std::vector<std::uint32_t> f(n + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (f[i] == 0) {
      f[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > f[i] || p * i > n) break;
      f[p * i] = p;
    }
  }

  // Pass 2, in place and ascending: entries below i already hold lpf, entries
  // from i up still hold spf, so lpf(i) = max(spf(i), lpf(i / spf(i))).
  if (n >= 1) f[1] = 1;
  for (std::uint64_t i = 2; i <= n; ++i) {
    const std::uint32_t spf = f[i];
    const std::uint64_t quot = i / spf;
    if (quot > 1 && f[quot] > spf) f[i] = f[quot];
  }
  return f;
}

SmoothCount dickman_check(std::uint64_t n_limit, double s) {
  if (n_limit == 0) throw domain_error("dickman_check: N must be >= 1");
  if (!(std::isfinite(s) && s >= 1.0))
    throw domain_error("dickman_check: s must be finite and >= 1");

  // Nudge before flooring so exact roots (1e6^{1/3} = 100) survive the
  // rounding of pow.
  const double y_real = std::floor(
      std::pow(static_cast<double>(n_limit), 1.0 / s) + 1e-9);
  if (!(y_real >= 2.0))
    throw domain_error("dickman_check: N^(1/s) must be at least 2");
  const auto y = static_cast<std::uint64_t>(y_real);

  const auto lpf = largest_prime_factor_sieve(n_limit);
  std::uint64_t psi = 0;
  for (std::uint64_t m = 1; m <= n_limit; ++m)
    if (lpf[m] <= y) ++psi;

  SmoothCount out;
  out.n_limit = n_limit;
  out.s = s;
  out.y = y;
  out.psi = psi;
  out.ratio = static_cast<double>(psi) / static_cast<double>(n_limit);
  out.rho_s = rho(DickmanParams(1.0), s);
  out.abs_error = std::abs(out.ratio - out.rho_s);
  return out;
}

}  // namespace dickman
