#include "dickman/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "detail/bigfloat.hpp"
#include "detail/spectral.hpp"
#include "dickman/errors.hpp"

namespace dickman {

namespace detail {

const SpectralTables& SpectralTables::get() {
  static SpectralTables t;
  return t;
}

SpectralTables::SpectralTables() {
  const mpfr_prec_t P = kPrec;
  const Big one(1.0, P), two(2.0, P);
  const Big pi = Big::pi(P);
  const int n = kG;
  const int N = kN;

  // Gauss-Legendre roots of P_32 on [-1,1] by Newton from the Chebyshev
  // guess; converges past 700 bits in ~10 doublings.
  std::array<Big, kG> gx, gw;
  for (int i = 0; i < n / 2; ++i) {
    Big xi(std::cos(M_PI * (i + 0.75) / (n + 0.5)), P);
    Big dp(P);
    for (int it = 0; it < 12; ++it) {
      Big p0(1.0, P), p1 = xi;
      for (int k = 2; k <= n; ++k) {
        Big pk = (xi * p1 * (2.0 * k - 1.0) - p0 * (double)(k - 1)) /
                 (unsigned long)k;
        p0 = std::move(p1);
        p1 = std::move(pk);
      }
      dp = (xi * p1 - p0) * (double)n / (xi * xi - one);
      xi -= p1 / dp;
    }
    gx[(std::size_t)i] = xi;
    gw[(std::size_t)i] = two / ((one - xi * xi) * dp * dp);
    gx[(std::size_t)(n - 1 - i)] = -xi;
    gw[(std::size_t)(n - 1 - i)] = gw[(std::size_t)i];
  }
  // map to [0,1], ascending
  for (int i = 0; i < n; ++i) {
    node[(std::size_t)i] = (one - gx[(std::size_t)i]) / two;
    weight[(std::size_t)i] = gw[(std::size_t)i] / two;
  }

  // Chebyshev-Lobatto points ascending on [0,1]
  for (int c = 0; c <= N; ++c)
    lob[(std::size_t)c] = (one - cos(pi * ((double)c / N))) / two;
  lob[0] = Big(0.0, P);
  lob[(std::size_t)N] = one;

  // DCT-I style coefficient matrix. With standard points xi_k = cos(k pi/N)
  // (descending) the coefficients are a_j = eta_j sum_k'' f(xi_k) cos(jk
  // pi/N); our samples ascend in x, i.e. sample c corresponds to k = N - c.
  for (int j = 0; j <= N; ++j) {
    for (int c = 0; c <= N; ++c) {
      int k = N - c;
      double eta = ((j == 0 || j == N) ? 1.0 : 2.0) / N;
      double beta = (k == 0 || k == N) ? 0.5 : 1.0;
      int r = (j * k) % (2 * N);
      fit[(std::size_t)j][(std::size_t)c] =
          cos(pi * ((double)r / N)) * (eta * beta);
    }
  }

  // Partial integrals of the Lagrange basis on the GL nodes: fit each basis
  // polynomial (degree 31, exactly captured by the 33-point interpolant),
  // integrate the Chebyshev series term by term, evaluate at the Lobatto
  // points. lambda[N] row reproduces the GL weights.
  std::array<Big, kG> den;
  for (int i = 0; i < n; ++i) {
    Big d(1.0, P);
    for (int j = 0; j < n; ++j)
      if (j != i) d *= node[(std::size_t)i] - node[(std::size_t)j];
    den[(std::size_t)i] = d;
  }
  for (int i = 0; i < n; ++i) {
    std::array<Big, kN + 1> samp;
    for (int c = 0; c <= N; ++c) {
      Big prod(1.0, P);
      for (int j = 0; j < n; ++j)
        if (j != i) prod *= lob[(std::size_t)c] - node[(std::size_t)j];
      samp[(std::size_t)c] = prod / den[(std::size_t)i];
    }
    std::array<Big, kN + 1> a;
    for (int j = 0; j <= N; ++j) {
      Big acc(P);
      for (int c = 0; c <= N; ++c)
        acc.add_prod(fit[(std::size_t)j][(std::size_t)c],
                     samp[(std::size_t)c]);
      a[(std::size_t)j] = acc;
    }
    // antiderivative coefficients in xi: b_j = (a_{j-1} - a_{j+1})/(2j) for
    // j >= 2, b_1 = a_0 - a_2/2, b_0 fixed by B(-1) = 0
    std::vector<Big> b((std::size_t)N + 2, Big(P));
    for (int j = 2; j <= N + 1; ++j) {
      Big hi = (j + 1 <= N) ? a[(std::size_t)(j + 1)] : Big(P);
      b[(std::size_t)j] = (a[(std::size_t)(j - 1)] - hi) / (unsigned long)(2 * j);
    }
    b[1] = a[0] - a[2] / 2ul;
    Big alt(P);
    for (int j = 1; j <= N + 1; ++j) {
      if (j % 2)
        alt += b[(std::size_t)j];
      else
        alt -= b[(std::size_t)j];
    }
    b[0] = alt;
    for (int c = 0; c <= N; ++c) {
      Big xi = lob[(std::size_t)c] * 2.0 - one;
      lambda[(std::size_t)c][(std::size_t)i] = clenshaw_big(b, xi) / 2ul;
    }
  }
}

double IntervalPieces::eval(double x) const {
  const int R = (int)panels.size();
  double d = x - (double)m;
  double u = (q == 1) ? d : std::pow(d, 1.0 / q);
  u = std::clamp(u, 0.0, 1.0);
  int idx = std::min(R - 1, (int)(u * R));
  const Panel& p = panels[(std::size_t)idx];
  double xi = std::clamp(2.0 * (u - p.u0) / p.du - 1.0, -1.0, 1.0);
  return p.scale * clenshaw(p.cheb.data(), 32, xi);
}

}  // namespace detail

namespace {

using detail::Big;
using ST = detail::SpectralTables;

enum class Route { density, complement };

// rho on [1,2] via the closed series: rho = x^{theta-1}(1 - theta Phi(z)),
// Phi(z) = z^theta sum_k z^k/(theta+k), z = (x-1)/x <= 1/2.
double rho_series12_d(double theta, double x) {
  double z = (x - 1.0) / x;
  if (z <= 0.0) return 1.0;
  double sum = 0.0, zk = 1.0;
  for (int k = 0; k < 256; ++k) {
    double term = zk / (theta + k);
    sum += term;
    if (term < 1e-18 * sum) break;
    zk *= z;
  }
  return std::pow(x, theta - 1.0) * (1.0 - theta * std::pow(z, theta) * sum);
}

// F on [1,2] via the complementary series: F = c x^theta (1/theta - Psi(z)),
// Psi(z) = z^{theta+1} sum_k z^k/(theta+1+k).
double cdf_series12_d(double theta, double c, double x) {
  double z = (x - 1.0) / x;
  double sum = 0.0, zk = 1.0;
  for (int k = 0; k < 256; ++k) {
    double term = zk / (theta + 1.0 + k);
    sum += term;
    if (term < 1e-18 * sum) break;
    zk *= z;
  }
  double psi = std::pow(z, theta + 1.0) * sum;
  return c * std::pow(x, theta) * (1.0 / theta - psi);
}

Big rho_series12_big(const Big& theta, const Big& t, const Big& z,
                     mpfr_prec_t P) {
  if (z.is_zero()) return Big(1.0, P);
  const Big eps = Big::pow2(-(long)P - 24, P);
  Big sum(P), zk(1.0, P), den = theta;
  const Big one(1.0, P);
  for (int k = 0; k < 4 * (int)P; ++k) {
    Big term = zk / den;
    sum += term;
    if (term < eps * sum) break;
    zk *= z;
    den += one;
  }
  return pow(t, theta - one) * (one - theta * pow(z, theta) * sum);
}

Big cdf_series12_big(const Big& theta, const Big& c, const Big& t,
                     const Big& z, mpfr_prec_t P) {
  const Big one(1.0, P);
  const Big eps = Big::pow2(-(long)P - 24, P);
  Big sum(P), zk(1.0, P), den = theta + one;
  for (int k = 0; k < 4 * (int)P; ++k) {
    Big term = zk / den;
    sum += term;
    if (term < eps * sum) break;
    zk *= z;
    den += one;
  }
  Big psi = z.is_zero() ? Big(P) : pow(z, theta + one) * sum;
  return c * pow(t, theta) * (one / theta - psi);
}

struct BigPanel {
  double u0 = 0.0;
  double du = 1.0;
  std::vector<Big> coeff;
};

struct BigInterval {
  int m = 2;
  int q = 1;
  std::vector<BigPanel> panels;

  // value of the stored function at u-coordinate w in [0,1]
  Big eval(const Big& w) const {
    const int R = (int)panels.size();
    double wd = w.to_double();
    int idx = std::min(R - 1, std::max(0, (int)(wd * R)));
    const BigPanel& p = panels[(std::size_t)idx];
    Big xi = (w - Big(p.u0, w.prec())) * (2.0 * R) - Big(1.0, w.prec());
    return clenshaw_big(p.coeff, xi);
  }
};

// Advances the integrating-factor accumulator across [2, X] at R uniform
// panels per unit interval in the substituted coordinate u (x = m + u^q).
// route density:    s = g = x^{1-theta} rho,  g' = -theta x^{-theta} rho(x-1)
// route complement: s = h = x^{-theta} F,     h' = -theta x^{-theta-1} F(x-1)
// Stored per interval: rho itself, or the complement G = 1 - F.
std::vector<BigInterval> build_big(double theta_d, int X, int q, int R,
                                   Route route) {
  const ST& sp = ST::get();
  const mpfr_prec_t P = ST::kPrec;
  const Big theta(theta_d, P), one(1.0, P);
  const Big cbig = exp(-(theta * Big::euler(P))) / gamma_fn(theta);

  auto source12 = [&](const Big& w) {
    // source at t = 1 + w^q in [1,2]: rho(t) or F(t) from the series
    Big wq = powi(w, (unsigned long)q);
    Big t = one + wq;
    Big z = wq / t;
    return route == Route::density ? rho_series12_big(theta, t, z, P)
                                   : cdf_series12_big(theta, cbig, t, z, P);
  };

  Big s(P);
  {
    Big two(2.0, P), half(0.5, P);
    s = (route == Route::density)
            ? pow(two, one - theta) * rho_series12_big(theta, two, half, P)
            : pow(two, -theta) * cdf_series12_big(theta, cbig, two, half, P);
  }

  const double du = 1.0 / R;
  const Big exp_int = (route == Route::density) ? -theta : -(theta + one);
  std::vector<BigInterval> out;
  out.reserve((std::size_t)std::max(0, X - 2));
  for (int m = 2; m < X; ++m) {
    BigInterval itv;
    itv.m = m;
    itv.q = q;
    itv.panels.reserve((std::size_t)R);
    const BigInterval* prev = out.empty() ? nullptr : &out.back();
    const Big m_b((double)m, P);
    for (int r = 0; r < R; ++r) {
      const double u0 = (double)r / R;
      const Big u0_b(u0, P);
      // pulled-back integrand at the GL nodes: phi = x^{-e} S(x-1) q w^{q-1};
      // x - 1 = m - 1 + w^q shares the u-coordinate w with the previous
      // interval, so no root extraction is needed.
      std::array<Big, ST::kG> phi;
      for (int i = 0; i < ST::kG; ++i) {
        Big w = u0_b + sp.node[(std::size_t)i] * du;
        Big src;
        if (m == 2) {
          src = source12(w);
        } else {
          Big g = prev->eval(w);
          src = (route == Route::density) ? std::move(g) : one - g;
        }
        Big x = m_b + powi(w, (unsigned long)q);
        Big f = pow(x, exp_int) * src;
        if (q > 1) f *= powi(w, (unsigned long)(q - 1)) * (double)q;
        phi[(std::size_t)i] = std::move(f);
      }
      BigPanel bp;
      bp.u0 = u0;
      bp.du = du;
      bp.coeff.assign((std::size_t)ST::kN + 1, Big(P));
      std::array<Big, ST::kN + 1> val;
      Big s_end(P);
      for (int c = 0; c <= ST::kN; ++c) {
        Big acc(P);
        for (int i = 0; i < ST::kG; ++i)
          acc.add_prod(sp.lambda[(std::size_t)c][(std::size_t)i],
                       phi[(std::size_t)i]);
        Big s_c = s - theta * (acc * du);
        if (c == ST::kN) s_end = s_c;
        Big wc = u0_b + sp.lob[(std::size_t)c] * du;
        Big xc = m_b + powi(wc, (unsigned long)q);
        val[(std::size_t)c] = (route == Route::density)
                                  ? pow(xc, theta - one) * s_c
                                  : one - pow(xc, theta) * s_c;
      }
      s = std::move(s_end);
      for (int j = 0; j <= ST::kN; ++j) {
        Big a(P);
        for (int c = 0; c <= ST::kN; ++c)
          a.add_prod(sp.fit[(std::size_t)j][(std::size_t)c],
                     val[(std::size_t)c]);
        bp.coeff[(std::size_t)j] = std::move(a);
      }
      itv.panels.push_back(std::move(bp));
    }
    out.push_back(std::move(itv));
  }
  return out;
}

std::vector<detail::IntervalPieces> to_pieces(
    const std::vector<BigInterval>& big) {
  std::vector<detail::IntervalPieces> out;
  out.reserve(big.size());
  for (const auto& bi : big) {
    detail::IntervalPieces ip;
    ip.m = bi.m;
    ip.q = bi.q;
    ip.panels.reserve(bi.panels.size());
    for (const auto& bp : bi.panels) {
      detail::Panel p;
      p.u0 = bp.u0;
      p.du = bp.du;
      Big mx(ST::kPrec);
      for (const auto& cj : bp.coeff) {
        Big a = abs(cj);
        if (a > mx) mx = a;
      }
      if (mx.is_zero()) {
        p.scale = 0.0;
      } else {
        p.scale = mx.to_double();
        for (int j = 0; j <= ST::kN; ++j)
          p.cheb[(std::size_t)j] = (bp.coeff[(std::size_t)j] / mx).to_double();
      }
      ip.panels.push_back(p);
    }
    out.push_back(std::move(ip));
  }
  return out;
}

double max_rel_diff(const std::vector<detail::IntervalPieces>& a,
                    const std::vector<detail::IntervalPieces>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    for (int t = 0; t < 17; ++t) {
      double u = (t + 0.41) / 17.0;
      double x = a[k].m + std::pow(u, a[k].q);
      double va = a[k].eval(x), vb = b[k].eval(x);
      double rel = std::abs(va - vb) / std::max(std::abs(vb), 1e-280);
      worst = std::max(worst, rel);
    }
  }
  return worst;
}

int pick_q(double theta) {
  for (int q = 1; q <= 12; ++q) {
    double qt = q * theta;
    if (std::abs(qt - std::round(qt)) <= 1e-9 * std::max(1.0, qt)) return q;
  }
  return 12;
}

std::pair<std::vector<detail::IntervalPieces>, double> refine(
    double theta, int X, int q, double tol, Route route) {
  if (X <= 2) return {{}, 0.0};
  auto coarse = to_pieces(build_big(theta, X, q, 4, route));
  double achieved = 1.0;
  for (int R = 8; R <= 64; R *= 2) {
    auto fine = to_pieces(build_big(theta, X, q, R, route));
    achieved = max_rel_diff(coarse, fine);
    if (achieved <= tol) return {std::move(fine), achieved};
    coarse = std::move(fine);
  }
  throw accuracy_error(
      "panel refinement exhausted its budget before reaching tol", achieved);
}

}  // namespace

DensityTable DensityTable::assemble_(const DickmanParams& params,
                                     double x_max, double tol,
                                     bool complement_route) {
  const Route route =
      complement_route ? Route::complement : Route::density;
  if (!(std::isfinite(x_max) && x_max >= 2.0))
    throw domain_error("build_tables: x_max must be finite and >= 2");
  if (x_max > 100.0)
    throw capability_error(
        "build_tables: x_max beyond the supported range (precision budget "
        "caps tables at x_max = 100)");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw domain_error("build_tables: tol must be in (0, 1e-6]");
  int X = (int)std::ceil(x_max - 1e-9);
  if (X < 2) X = 2;
  // absolute quadrature error persists in the accumulator while the solution
  // decays like 1/Gamma(x); this is the relative amplification it suffers
  double amp_bits =
      (std::lgamma((double)X + 1.0) +
       X * std::max(0.0, -std::log(params.theta))) /
      std::log(2.0);
  if (amp_bits + 180.0 > (double)ST::kPrec)
    throw capability_error(
        "build_tables: theta/x_max combination exceeds the precision budget");

  int q = pick_q(params.theta);
  auto [pieces, achieved] = refine(params.theta, X, q, tol, route);

  DensityTable t;
  t.theta_ = params.theta;
  t.x_max_ = (double)X;
  t.c_ = dickman::c_theta(params.theta);
  t.tol_ = tol;
  t.achieved_ = achieved;
  t.kind_ = (route == Route::density) ? DensityTable::Construction::density_ode
                                      : DensityTable::Construction::cdf_recursion;
  t.pieces_ = std::move(pieces);

  // Mass certificate: the missing mass 1 - F(X) must be nonnegative (up to
  // 10 tol) and below a provable tail bound of the 1/Gamma(x+1) decay shape.
  // From x rho(x) = theta int_{x-1}^x rho, once rho is nonincreasing on
  // [X-1, X] it stays nonincreasing and rho(X+j) <= rho(X-1) prod theta/(X+i),
  // so the tail integral is below the unit-interval box sum. When rho is not
  // yet decreasing at X (theta too large for this x_max) no bound is provable
  // and only a negligible tail passes.
  double f_end = (route == Route::density) ? t.c_ * t.r_accum((double)X)
                                           : 1.0 - t.complement((double)X);
  const double defect = 1.0 - f_end;
  bool monotone = true;
  double prev = t.rho((double)X - 1.0);
  for (int i = 1; i <= 16 && monotone; ++i) {
    const double cur = t.rho((double)X - 1.0 + i / 16.0);
    if (cur > prev * (1.0 + 1e-12)) monotone = false;
    prev = cur;
  }
  double tail_bound = 0.0;
  if (monotone) {
    double term = t.c_ * t.rho((double)X - 1.0);
    for (int j = 0; j <= 400 && term > 1e-3 * tol; ++j) {
      term *= params.theta / (X + j);
      tail_bound += term;
    }
  }
  if (defect < -10.0 * tol || defect > tail_bound + 10.0 * tol)
    throw accuracy_error(
        "build_tables: total-mass defect exceeds the certified tail bound "
        "plus 10*tol",
        std::abs(defect));
  return t;
}

DickmanParams::DickmanParams(double t) : theta(t) {
  if (!(std::isfinite(t) && t > 0.0))
    throw domain_error("DickmanParams: theta must be finite and > 0");
}

double gamma_function(double x) {
  if (!(std::isfinite(x) && x > 0.0))
    throw domain_error("gamma_function: x must be finite and > 0");
  return gamma_fn(Big(x, 128)).to_double();
}

double c_theta(double theta) {
  if (!(std::isfinite(theta) && theta > 0.0))
    throw domain_error("c_theta: theta must be finite and > 0");
  const mpfr_prec_t P = 192;
  Big t(theta, P);
  return (exp(-(t * Big::euler(P))) / gamma_fn(t)).to_double();
}

double DensityTable::rho_series12(double x) const {
  return rho_series12_d(theta_, x);
}

double DensityTable::cdf_series12(double x) const {
  return cdf_series12_d(theta_, c_, x);
}

double DensityTable::complement(double t) const {
  if (t <= 0.0) return 1.0;
  if (t <= 1.0) return 1.0 - c_ * std::pow(t, theta_) / theta_;
  if (t < 2.0 || pieces_.empty())
    return 1.0 - cdf_series12(std::min(t, 2.0));
  std::size_t idx =
      std::min((std::size_t)((int)t - 2), pieces_.size() - 1);
  return pieces_[idx].eval(t);
}

double DensityTable::rho(double x) const {
  if (!std::isfinite(x)) throw domain_error("rho: x must be finite");
  if (x <= 0.0) return 0.0;
  if (x > x_max_ * (1.0 + 1e-12))
    throw domain_error("rho: x beyond table x_max");
  x = std::min(x, x_max_);
  if (kind_ == Construction::density_ode) {
    if (x < 1.0) return std::pow(x, theta_ - 1.0);
    if (x < 2.0 || pieces_.empty()) return rho_series12(std::min(x, 2.0));
    std::size_t idx =
        std::min((std::size_t)((int)x - 2), pieces_.size() - 1);
    return pieces_[idx].eval(x);
  }
  // recursion construction: density identity rho = theta (F(x)-F(x-1))/(c x)
  if (x <= 1.0) return std::pow(x, theta_ - 1.0);
  return theta_ * (complement(x - 1.0) - complement(x)) / (c_ * x);
}

double DensityTable::pdf(double x) const { return c_ * rho(x); }

double DensityTable::r_accum(double x) const {
  double acc = 0.0, t = x;
  while (t > 1.0) {
    if (kind_ == Construction::density_ode) {
      double r;
      if (t < 2.0 || pieces_.empty()) {
        r = rho_series12(std::min(t, 2.0));
      } else {
        std::size_t idx =
            std::min((std::size_t)((int)t - 2), pieces_.size() - 1);
        r = pieces_[idx].eval(t);
      }
      acc += t * r;
    }
    t -= 1.0;
  }
  return (std::pow(std::max(t, 0.0), theta_) + acc) / theta_;
}

double DensityTable::cdf(double x) const {
  if (!std::isfinite(x)) throw domain_error("cdf: x must be finite");
  if (x <= 0.0) return 0.0;
  if (x > x_max_) x = x_max_;  // tail beyond x_max is below tol
  double f = (kind_ == Construction::density_ode) ? c_ * r_accum(x)
                                                  : 1.0 - complement(x);
  return std::clamp(f, 0.0, 1.0);
}

double DensityTable::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw domain_error("quantile: argument must be in [0,1]");
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return x_max_;
  double lo = 0.0, hi = x_max_;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * x_max_; ++it) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double DensityTable::mean_mass() const {
  // int_0^X x p dx = theta int_{X-1}^X F(t) dt (integrate the delay identity
  // x p = theta c (R(x) - R(x-1))); one GL panel on the final interval.
  const auto& sp = ST::get();
  double a = x_max_ - 1.0, acc = 0.0;
  for (int i = 0; i < ST::kG; ++i)
    acc += sp.weight[(std::size_t)i].to_double() *
           cdf(a + sp.node[(std::size_t)i].to_double());
  return theta_ * acc;
}

DensityTable build_tables(const DickmanParams& params, double x_max,
                          double tol) {
  return DensityTable::assemble_(params, x_max, tol, false);
}

DensityTable cdf_via_recursion(const DickmanParams& params, double x_max,
                               double tol) {
  return DensityTable::assemble_(params, x_max, tol, true);
}

std::shared_ptr<const DensityTable> shared_table(const DickmanParams& params,
                                                 double x_max, double tol) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, double>,
                  std::shared_ptr<const DensityTable>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(params.theta, std::ceil(x_max), tol);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const DensityTable>(
      build_tables(params, x_max, tol));
  cache.emplace(key, t);
  return t;
}

double rho(const DickmanParams& params, double x, double tol) {
  if (!std::isfinite(x)) throw domain_error("rho: x must be finite");
  if (!(tol > 0.0 && tol <= 1e-6))
    throw domain_error("rho: tol must be in (0, 1e-6]");
  if (x <= 0.0) return 0.0;
  if (x <= 1.0) return std::pow(x, params.theta - 1.0);
  if (x <= 2.0) return rho_series12_d(params.theta, x);
  double x_need = std::max(20.0, 10.0 * std::ceil(x / 10.0));
  return shared_table(params, x_need, tol)->rho(x);
}

namespace {

template <typename F>
double gk15(const F& f, double a, double b, double& err) {
  // 15-point Kronrod pair over the 7-point Gauss rule (QUADPACK abscissae)
  static const double xgk[8] = {
      0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
      0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
      0.20778495500789846760, 0.0};
  static const double wgk[8] = {
      0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
      0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
      0.20443294007529889241, 0.20948214108472782801};
  static const double wg[4] = {0.12948496616886969327, 0.27970539148927666790,
                               0.38183005050511894495, 0.41795918367346938776};
  double hl = 0.5 * (b - a), xm = 0.5 * (a + b);
  double fc = f(xm);
  double k = wgk[7] * fc, g = wg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    double dx = hl * xgk[i];
    double f1 = f(xm - dx), f2 = f(xm + dx);
    k += wgk[i] * (f1 + f2);
    if (i % 2 == 1) g += wg[i / 2] * (f1 + f2);
  }
  k *= hl;
  g *= hl;
  err = std::abs(k - g);
  return k;
}

}  // namespace

double laplace(const DickmanParams& params, const MixingLaw& mixing,
               double lambda) {
  if (!(std::isfinite(lambda) && lambda >= 0.0))
    throw domain_error("laplace: lambda must be finite and >= 0");
  if (lambda == 0.0) return 1.0;
  auto f = [&](double x) { return mixing.mgf_neg_m1(lambda * x) / x; };
  struct Seg {
    double a, b;
    int depth;
  };
  std::vector<Seg> stack{{0.0, 1.0, 0}};
  double total = 0.0;
  while (!stack.empty()) {
    Seg s = stack.back();
    stack.pop_back();
    double err = 0.0;
    double k = gk15(f, s.a, s.b, err);
    if (err <= 1e-14 + 1e-13 * std::abs(k) || s.depth >= 40) {
      total += k;
      continue;
    }
    double mid = 0.5 * (s.a + s.b);
    stack.push_back({s.a, mid, s.depth + 1});
    stack.push_back({mid, s.b, s.depth + 1});
  }
  return std::exp(params.theta * total);
}

double cumulant(const DickmanParams& params, const MixingLaw& mixing,
                unsigned m) {
  if (m < 1) throw domain_error("cumulant: m must be >= 1");
  return params.theta * mixing.moment(m) / (double)m;
}

}  // namespace dickman
