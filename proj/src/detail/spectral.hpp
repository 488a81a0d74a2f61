#pragma once

#include <array>
#include <mutex>
#include <vector>

#include "bigfloat.hpp"

namespace dickman::detail {

// Fixed spectral machinery shared by every table construction:
//  - 32-point Gauss-Legendre rule on [0,1],
//  - 33 Chebyshev-Lobatto sample points on [0,1] (ascending),
//  - a matrix turning samples at those points into Chebyshev coefficients,
//  - partial-integral functionals lambda[c][i] = int_0^{lob[c]} l_i(v) dv of
//    the Lagrange basis on the quadrature nodes, so running integrals inside
//    a panel come out as dense output at the Lobatto points.
// Everything is computed once at kPrec bits; constructions at lower working
// precision round these on use.
struct SpectralTables {
  static constexpr int kG = 32;    // quadrature nodes per panel
  static constexpr int kN = 32;    // Chebyshev degree (kN + 1 sample points)
  static constexpr mpfr_prec_t kPrec = 768;

  std::array<Big, kG> node;      // GL nodes, ascending in (0,1)
  std::array<Big, kG> weight;    // GL weights on [0,1], sum 1
  std::array<Big, kN + 1> lob;   // Lobatto points, ascending, lob[0]=0, lob[kN]=1
  // coeff[j] = sum_k fit[j][k] * f(lob[k])
  std::array<std::array<Big, kN + 1>, kN + 1> fit;
  // lambda[c][i]: weight of f(node[i]) in int_0^{lob[c]} of the interpolant
  std::array<std::array<Big, kG>, kN + 1> lambda;

  static const SpectralTables& get();

 private:
  SpectralTables();
};

// value = sum_j coeff[j] T_j(xi) by Clenshaw recurrence, xi in [-1,1]
inline double clenshaw(const double* coeff, int n, double xi) {
  double b1 = 0.0, b2 = 0.0;
  for (int j = n; j >= 1; --j) {
    double b = coeff[j] + 2.0 * xi * b1 - b2;
    b2 = b1;
    b1 = b;
  }
  return coeff[0] + xi * b1 - b2;
}

inline Big clenshaw_big(const std::vector<Big>& coeff, const Big& xi) {
  const mpfr_prec_t p = xi.prec();
  Big b1(p), b2(p);
  Big two_xi = xi * 2.0;
  for (int j = static_cast<int>(coeff.size()) - 1; j >= 1; --j) {
    Big b = coeff[static_cast<std::size_t>(j)] + two_xi * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b);
  }
  return coeff[0] + xi * b1 - b2;
}

}  // namespace dickman::detail
