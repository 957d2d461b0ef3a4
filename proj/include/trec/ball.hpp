#pragma once
// Complex midpoint-radius arithmetic ("balls") on MPFR midpoints.  Midpoints use
// the working precision (default 256 bits, override via TR_PRECISION_BITS); the
// radius is a double upper bound propagated outward through every operation.
// Branch cuts: sqrt/log take principal values; radii in this codebase are far
// too small to straddle a cut for the sample points we evaluate at.

#include <mpfr.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "trec/exact.hpp"

namespace trec {

inline mpfr_prec_t& ball_precision_ref() {
  static mpfr_prec_t prec = [] {
    if (const char* e = std::getenv("TR_PRECISION_BITS")) {
      long v = std::atol(e);
      if (v >= 64 && v <= 16384) return (mpfr_prec_t)v;
    }
    return (mpfr_prec_t)256;
  }();
  return prec;
}
inline mpfr_prec_t ball_precision() { return ball_precision_ref(); }
inline void set_ball_precision(mpfr_prec_t p) { ball_precision_ref() = p; }

// one working-precision epsilon with margin, used for midpoint rounding slack
inline double ball_eps() { return std::ldexp(1.0, -(int)(ball_precision() - 4)); }

// ------------------------------------------------------------------ real mpfr

class RF {
 public:
  RF() { mpfr_init2(v_, ball_precision()); mpfr_set_zero(v_, 1); }
  RF(long x) { mpfr_init2(v_, ball_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
  RF(int x) : RF((long)x) {}
  RF(double x) { mpfr_init2(v_, ball_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
  RF(const mpq_class& q) {
    mpfr_init2(v_, ball_precision());
    mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
  }
  explicit RF(const std::string& s) {
    mpfr_init2(v_, ball_precision());
    if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw std::invalid_argument("RF: cannot parse '" + s + "'");
  }
  RF(const RF& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  RF(RF&& o) noexcept { mpfr_init2(v_, ball_precision()); mpfr_swap(v_, o.v_); }
  RF& operator=(const RF& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  RF& operator=(RF&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~RF() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  static RF pi() { RF r; mpfr_const_pi(r.v_, MPFR_RNDN); return r; }

  RF operator-() const { RF r; mpfr_neg(r.v_, v_, MPFR_RNDN); return r; }
  friend RF operator+(const RF& a, const RF& b) { RF r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend RF operator-(const RF& a, const RF& b) { RF r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend RF operator*(const RF& a, const RF& b) { RF r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend RF operator/(const RF& a, const RF& b) { RF r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

  RF sqrt() const { RF r; mpfr_sqrt(r.v_, v_, MPFR_RNDN); return r; }
  RF exp() const { RF r; mpfr_exp(r.v_, v_, MPFR_RNDN); return r; }
  RF log() const { RF r; mpfr_log(r.v_, v_, MPFR_RNDN); return r; }
  RF sin() const { RF r; mpfr_sin(r.v_, v_, MPFR_RNDN); return r; }
  RF cos() const { RF r; mpfr_cos(r.v_, v_, MPFR_RNDN); return r; }
  RF abs() const { RF r; mpfr_abs(r.v_, v_, MPFR_RNDN); return r; }
  static RF atan2(const RF& y, const RF& x) {
    RF r;
    mpfr_atan2(r.v_, y.v_, x.v_, MPFR_RNDN);
    return r;
  }
  static RF hypot(const RF& a, const RF& b) {
    RF r;
    mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }

  int sgn() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_); }
  double get_d() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // upper bound on |value| as a double
  double abs_ub() const {
    double d = std::fabs(mpfr_get_d(v_, MPFR_RNDA));
    return d * (1.0 + 1e-9) + 1e-300;
  }
  friend int cmp(const RF& a, const RF& b) { return mpfr_cmp(a.v_, b.v_); }

  std::string str(int digits = 0) const {
    if (digits <= 0) digits = (int)(ball_precision() * 0.302) + 3;
    mpfr_exp_t e;
    char* s = mpfr_get_str(nullptr, &e, 10, digits, v_, MPFR_RNDN);
    std::string m(s);
    mpfr_free_str(s);
    bool neg = !m.empty() && m[0] == '-';
    std::string digs = neg ? m.substr(1) : m;
    if (digs.empty()) digs = "0";
    std::string out = (neg ? "-" : "") + ("0." + digs) + "e" + std::to_string((long)e);
    return out;
  }

 private:
  mpfr_t v_;
};

// ------------------------------------------------------------- complex ball

struct CB {
  RF re, im;
  double rad = 0.0;

  CB() = default;
  CB(long x) : re(x), im(0), rad(0.0) {}
  CB(const RF& r) : re(r), im(0), rad(0.0) {}
  CB(const RF& r, const RF& i, double rd = 0.0) : re(r), im(i), rad(rd) {}
  CB(const mpq_class& q) : re(q), im(0), rad(0.0) {}

  static CB from_doubles(double r, double i, double rd = 0.0) { return CB(RF(r), RF(i), rd); }
  static CB i() { return CB(RF(0l), RF(1l), 0.0); }

  double mid_abs_ub() const {
    double a = re.abs_ub(), b = im.abs_ub();
    return std::sqrt(a * a + b * b) * (1.0 + 1e-9);
  }
  double abs_ub() const { return mid_abs_ub() + rad; }
  double abs_lb() const {
    double a = std::fabs(re.get_d()), b = std::fabs(im.get_d());
    double m = std::sqrt(a * a + b * b) * (1.0 - 1e-9) - rad;
    return m > 0 ? m : 0.0;
  }
  bool contains_zero() const { return abs_lb() <= 0.0; }

  CB operator-() const { return CB(-re, -im, rad); }
  CB conj() const { return CB(re, -im, rad); }

  friend CB operator+(const CB& a, const CB& b) {
    CB r(a.re + b.re, a.im + b.im);
    r.rad = a.rad + b.rad + ball_eps() * r.mid_abs_ub();
    return r;
  }
  friend CB operator-(const CB& a, const CB& b) {
    CB r(a.re - b.re, a.im - b.im);
    r.rad = a.rad + b.rad + ball_eps() * r.mid_abs_ub();
    return r;
  }
  friend CB operator*(const CB& a, const CB& b) {
    CB r(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    double ua = a.mid_abs_ub(), ub = b.mid_abs_ub();
    r.rad = ua * b.rad + ub * a.rad + a.rad * b.rad + ball_eps() * r.mid_abs_ub();
    return r;
  }
  CB inv() const {
    double lb = abs_lb();
    if (lb <= 0.0) throw std::domain_error("CB::inv: ball contains zero");
    RF n = re * re + im * im;
    CB r(re / n, -(im / n));
    r.rad = rad / (lb * lb) + ball_eps() * r.mid_abs_ub();
    return r;
  }
  friend CB operator/(const CB& a, const CB& b) { return a * b.inv(); }

  CB& operator+=(const CB& o) { return *this = *this + o; }
  CB& operator-=(const CB& o) { return *this = *this - o; }
  CB& operator*=(const CB& o) { return *this = *this * o; }
  CB& operator/=(const CB& o) { return *this = *this / o; }

  CB pow(long e) const {
    if (e < 0) return inv().pow(-e);
    CB acc(1), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
  std::string str() const { return re.str() + " + " + im.str() + "*I  (rad " + std::to_string(rad) + ")"; }
};

inline CB csqrt(const CB& z) {
  double lb = z.abs_lb();
  if (lb <= 0.0) throw std::domain_error("csqrt: ball contains zero");
  // principal square root via polar form
  RF r = RF::hypot(z.re, z.im);
  RF th = RF::atan2(z.im, z.re);
  RF sr = r.sqrt();
  RF h = th * RF(0.5);
  CB out(sr * h.cos(), sr * h.sin());
  out.rad = z.rad / (2.0 * std::sqrt(lb)) + ball_eps() * out.mid_abs_ub();
  return out;
}

inline CB cexp(const CB& z) {
  RF m = z.re.exp();
  CB out(m * z.im.cos(), m * z.im.sin());
  double ub = out.mid_abs_ub();
  out.rad = ub * z.rad * (1.0 + z.rad) + ball_eps() * ub;
  return out;
}

inline CB clog(const CB& z) {
  double lb = z.abs_lb();
  if (lb <= 0.0) throw std::domain_error("clog: ball contains zero");
  RF r = RF::hypot(z.re, z.im);
  CB out(r.log(), RF::atan2(z.im, z.re));
  out.rad = z.rad / lb + ball_eps() * (out.mid_abs_ub() + 1.0);
  return out;
}

inline CB csin(const CB& z) {
  CB iz = CB::i() * z;
  return (cexp(iz) - cexp(-iz)) / (CB(2) * CB::i());
}
inline CB ccos(const CB& z) {
  CB iz = CB::i() * z;
  return (cexp(iz) + cexp(-iz)) / CB(2);
}
inline CB ccot(const CB& z) { return ccos(z) / csin(z); }

inline CB to_ball(const Exact& x) {
  CB v(x.base().re, 0);
  v.im = RF(x.base().im);
  if (x.radicand() != 0) {
    RF rt = RF(mpq_class(x.radicand())).sqrt();
    CB b(RF(x.ext_coeff().re), RF(x.ext_coeff().im));
    v = v + b * CB(rt);
  }
  v.rad += 4.0 * ball_eps() * v.mid_abs_ub();
  return v;
}

}  // namespace trec
