#pragma once

#include <mpfr.h>

#include <cstdint>
#include <utility>

namespace dickman::detail {

// Minimal RAII value type over MPFR. Each value carries its own precision;
// binary operators allocate the wider of the operand precisions. Rounding is
// always to nearest. Only the handful of functions the table construction
// needs are wrapped.
class Big {
 public:
  Big() { mpfr_init2(v_, 64); mpfr_set_zero(v_, 1); }
  explicit Big(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  Big(double x, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  Big(const Big& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Big(Big&& o) noexcept {
    mpfr_init2(v_, 64);
    mpfr_swap(v_, o.v_);
  }
  Big& operator=(const Big& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Big& operator=(Big&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Big() { mpfr_clear(v_); }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  Big& operator+=(const Big& b) {
    mpfr_add(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  Big& operator-=(const Big& b) {
    mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  Big& operator*=(const Big& b) {
    mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }
  Big& operator/=(const Big& b) {
    mpfr_div(v_, v_, b.v_, MPFR_RNDN);
    return *this;
  }

  friend Big operator+(const Big& a, const Big& b) {
    Big r(maxp(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Big operator-(const Big& a, const Big& b) {
    Big r(maxp(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Big operator*(const Big& a, const Big& b) {
    Big r(maxp(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Big operator/(const Big& a, const Big& b) {
    Big r(maxp(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Big operator-(const Big& a) {
    Big r(a.prec());
    mpfr_neg(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Big operator*(const Big& a, double d) {
    Big r(a.prec());
    mpfr_mul_d(r.v_, a.v_, d, MPFR_RNDN);
    return r;
  }
  friend Big operator/(const Big& a, unsigned long u) {
    Big r(a.prec());
    mpfr_div_ui(r.v_, a.v_, u, MPFR_RNDN);
    return r;
  }
  friend bool operator<(const Big& a, const Big& b) {
    return mpfr_cmp(a.v_, b.v_) < 0;
  }
  friend bool operator>(const Big& a, const Big& b) {
    return mpfr_cmp(a.v_, b.v_) > 0;
  }

  friend Big exp(const Big& a) {
    Big r(a.prec());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Big log(const Big& a) {
    Big r(a.prec());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Big pow(const Big& a, const Big& e) {
    Big r(maxp(a, e));
    mpfr_pow(r.v_, a.v_, e.v_, MPFR_RNDN);
    return r;
  }
  friend Big abs(const Big& a) {
    Big r(a.prec());
    mpfr_abs(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  // a^(1/q), a >= 0
  friend Big root(const Big& a, unsigned long q) {
    Big r(a.prec());
    mpfr_rootn_ui(r.v_, a.v_, q, MPFR_RNDN);
    return r;
  }
  friend Big powi(const Big& a, unsigned long q) {
    Big r(a.prec());
    mpfr_pow_ui(r.v_, a.v_, q, MPFR_RNDN);
    return r;
  }
  static Big pow2(long e, mpfr_prec_t p) {
    Big r(p);
    mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
    return r;
  }

  static Big pi(mpfr_prec_t p) {
    Big r(p);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }
  static Big euler(mpfr_prec_t p) {
    Big r(p);
    mpfr_const_euler(r.v_, MPFR_RNDN);
    return r;
  }
  friend Big cos(const Big& a) {
    Big r(a.prec());
    mpfr_cos(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Big gamma_fn(const Big& a) {
    Big r(a.prec());
    mpfr_gamma(r.v_, a.v_, MPFR_RNDN);
    return r;
  }

  // this += a * b without the temporary
  void add_prod(const Big& a, const Big& b) { mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN); }

 private:
  static mpfr_prec_t maxp(const Big& a, const Big& b) {
    return a.prec() > b.prec() ? a.prec() : b.prec();
  }
  mpfr_t v_;
};

}  // namespace dickman::detail
