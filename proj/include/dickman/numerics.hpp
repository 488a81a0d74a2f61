#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "mixing.hpp"

namespace dickman {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct DickmanParams {
  double theta;
  explicit DickmanParams(double t);  // requires finite t > 0
};

double gamma_function(double x);  // Gamma(x), x > 0
double c_theta(double theta);     // e^{-theta gamma} / Gamma(theta)

namespace detail {

// One Chebyshev panel in the substituted coordinate u, x = m + u^q. The
// stored coefficients are scaled to O(1) so deep-tail values keep full
// relative precision in double.
struct Panel {
  double u0 = 0.0;
  double du = 1.0;
  double scale = 1.0;
  std::array<double, 33> cheb{};
};

struct IntervalPieces {
  int m = 2;   // covers x in [m, m+1]
  int q = 1;   // substitution power
  std::vector<Panel> panels;
  double eval(double x) const;
};

}  // namespace detail

// Piecewise-spectral tables for one theta. Two independent constructions:
//  - density_ode: advances g = x^{1-theta} rho via g' = -theta x^{-theta}
//    rho(x-1); pieces hold rho per unit interval.
//  - cdf_recursion: advances h = x^{-theta} F via h' = -theta x^{-theta-1}
//    F(x-1); pieces hold the complement G = 1 - F, which decays like the
//    tail and so stays relatively accurate where F saturates at 1.
// Both start from closed forms on (0,2] and are immutable once built.
class DensityTable {
 public:
  enum class Construction { density_ode, cdf_recursion };

  double theta() const { return theta_; }
  double x_max() const { return x_max_; }
  double c_theta() const { return c_; }
  double grid_tol() const { return tol_; }
  double achieved_error() const { return achieved_; }
  Construction construction() const { return kind_; }

  // rho_theta(x); 0 for x <= 0; defined on [0, x_max]
  double rho(double x) const;
  double pdf(double x) const;  // c_theta * rho
  double cdf(double x) const;  // clamped to [0,1]
  double quantile(double q) const;
  double mean_mass() const;  // int x p(x) dx over [0, x_max]

 private:
  friend DensityTable build_tables(const DickmanParams&, double, double);
  friend DensityTable cdf_via_recursion(const DickmanParams&, double, double);
  DensityTable() = default;

  // shared construction path for the two routes
  static DensityTable assemble_(const DickmanParams& params, double x_max,
                                double tol, bool complement_route);

  double rho_series12(double x) const;  // closed series on [1,2]
  double cdf_series12(double x) const;  // closed series on [1,2]
  double complement(double x) const;    // G = 1 - F on [2, x_max] (route 2)
  double r_accum(double x) const;       // R(x) = int_0^x rho (route 1)

  double theta_ = 1.0;
  double x_max_ = 20.0;
  double c_ = 1.0;
  double tol_ = 1e-10;
  double achieved_ = 0.0;
  Construction kind_ = Construction::density_ode;
  std::vector<detail::IntervalPieces> pieces_;
};

// Both builders accept x_max in [2, ~100] and tol in (0, 1e-6]; they refine
// the panel count until two consecutive resolutions agree to tol, and throw
// accuracy_error (carrying the achieved error) if the hard budget runs out.
DensityTable build_tables(const DickmanParams& params, double x_max = 20.0,
                          double tol = 1e-10);
DensityTable cdf_via_recursion(const DickmanParams& params, double x_max = 20.0,
                               double tol = 1e-10);

// Convenience scalar rho with an internal table cache; tables are built on
// demand and extended when x exceeds the cached range.
double rho(const DickmanParams& params, double x, double tol = 1e-10);

// Process-wide table cache keyed on (theta, x_max, tol); builds on first use.
std::shared_ptr<const DensityTable> shared_table(const DickmanParams& params,
                                                 double x_max = 20.0,
                                                 double tol = 1e-10);

// Laplace transform of GD^(X)(theta):
//   exp(theta * int_0^1 (E exp(-lambda x X) - 1)/x dx),
// adaptive quadrature on the removable-singularity integrand; exactly 1 at
// lambda = 0.
double laplace(const DickmanParams& params, const MixingLaw& mixing,
               double lambda);

// m-th cumulant theta * E[X^m] / m, m >= 1.
double cumulant(const DickmanParams& params, const MixingLaw& mixing,
                unsigned m);

}  // namespace dickman
