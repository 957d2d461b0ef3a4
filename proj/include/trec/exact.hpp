#pragma once
// Exact scalar for the engine: Gaussian rationals Q(i), optionally extended by a
// single adjoined square root of a squarefree positive integer.  All curve-side
// computations stay in this field; mixing two different radicals is an error.

#include <gmpxx.h>

#include <complex>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace trec {

// ---------------------------------------------------------------- mpz helpers

inline mpz_class factorial_z(unsigned long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

// odd double factorial, defined down to (-3)!! = -1, (-1)!! = 1
inline mpz_class double_factorial_z(long n) {
  if (n == -1) return 1;
  if (n == -3) return -1;
  if (n < -3 || n % 2 == 0)
    throw std::invalid_argument("double_factorial_z: want odd n >= -3, got " + std::to_string(n));
  mpz_class r = 1;
  for (long k = n; k >= 1; k -= 2) r *= k;
  return r;
}

inline mpz_class binomial_z(unsigned long n, unsigned long k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// exact square root of a nonnegative rational, if it exists
inline std::optional<mpq_class> rational_sqrt(const mpq_class& x) {
  if (sgn(x) < 0) return std::nullopt;
  const mpz_class num = x.get_num(), den = x.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(sn, sd);
}

// write m = f^2 * r with r squarefree as far as trial division reaches.
// r is canonical enough for this codebase: radicands here stay tiny.
inline void extract_square_part(const mpz_class& m_in, mpz_class& f, mpz_class& r) {
  if (m_in <= 0) throw std::invalid_argument("extract_square_part: need positive argument");
  mpz_class m = m_in;
  f = 1;
  for (unsigned long p = 2; p <= 1000; p = (p == 2 ? 3 : p + 2)) {
    mpz_class p2 = mpz_class(p) * p;
    while (mpz_divisible_p(m.get_mpz_t(), p2.get_mpz_t())) {
      m /= p2;
      f *= p;
    }
  }
  if (mpz_perfect_square_p(m.get_mpz_t())) {
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), m.get_mpz_t());
    f *= s;
    m = 1;
  }
  r = m;
}

// ------------------------------------------------------------------ Q(i) part

struct QI {
  mpq_class re, im;

  QI() : re(0), im(0) {}
  QI(long r) : re(r), im(0) {}
  QI(const mpq_class& r) : re(r), im(0) {}
  QI(mpq_class r, mpq_class i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }

  QI operator-() const { return QI(-re, -im); }
  QI operator+(const QI& o) const { return QI(re + o.re, im + o.im); }
  QI operator-(const QI& o) const { return QI(re - o.re, im - o.im); }
  QI operator*(const QI& o) const {
    return QI(re * o.re - im * o.im, re * o.im + im * o.re);
  }
  QI conj() const { return QI(re, -im); }
  mpq_class norm2() const { return re * re + im * im; }
  QI inverse() const {
    mpq_class n = norm2();
    if (sgn(n) == 0) throw std::domain_error("QI: division by zero");
    return QI(re / n, -im / n);
  }
  QI operator/(const QI& o) const { return *this * o.inverse(); }
  bool operator==(const QI& o) const { return re == o.re && im == o.im; }
  bool operator!=(const QI& o) const { return !(*this == o); }

  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }
};

inline QI qi_i() { return QI(mpq_class(0), mpq_class(1)); }

// exact complex square root within Q(i), if one exists
inline std::optional<QI> sqrt_in_qi(const QI& x) {
  if (x.is_zero()) return QI();
  if (x.is_real()) {
    if (sgn(x.re) > 0) {
      if (auto r = rational_sqrt(x.re)) return QI(*r);
      return std::nullopt;
    }
    if (auto r = rational_sqrt(-x.re)) return QI(mpq_class(0), *r);
    return std::nullopt;
  }
  auto n = rational_sqrt(x.norm2());
  if (!n) return std::nullopt;
  mpq_class u2 = (x.re + *n) / 2;
  auto u = rational_sqrt(u2);
  if (!u || sgn(*u) == 0) return std::nullopt;
  mpq_class v = x.im / (2 * (*u));
  QI s(*u, v);
  if (!(s * s == x)) return std::nullopt;
  return s;
}

// ----------------------------------------------------------------- full field

class Exact {
 public:
  Exact() : a_(), b_(), r_(0) {}
  Exact(long v) : a_(v), b_(), r_(0) {}
  Exact(const mpq_class& v) : a_(v), b_(), r_(0) {}
  Exact(const QI& v) : a_(v), b_(), r_(0) {}
  Exact(QI a, QI b, mpz_class r) : a_(std::move(a)), b_(std::move(b)), r_(std::move(r)) {
    normalize();
  }

  const QI& base() const { return a_; }
  const QI& ext_coeff() const { return b_; }
  const mpz_class& radicand() const { return r_; }
  bool has_ext() const { return r_ != 0; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  Exact operator-() const { return Exact(-a_, -b_, r_); }

  Exact operator+(const Exact& o) const {
    mpz_class r = unify(o);
    return Exact(a_ + o.a_, b_ + o.b_, r);
  }
  Exact operator-(const Exact& o) const { return *this + (-o); }
  Exact operator*(const Exact& o) const {
    mpz_class r = unify(o);
    if (r == 0) return Exact(a_ * o.a_);
    QI rq{mpq_class(r), mpq_class(0)};
    return Exact(a_ * o.a_ + b_ * o.b_ * rq, a_ * o.b_ + b_ * o.a_, r);
  }
  Exact inverse() const {
    if (is_zero()) throw std::domain_error("Exact: division by zero");
    if (r_ == 0 || b_.is_zero()) return Exact(a_.inverse());
    QI rq{mpq_class(r_), mpq_class(0)};
    QI nrm = a_ * a_ - b_ * b_ * rq;  // nonzero: sqrt(r) is irrational over Q(i)
    QI ni = nrm.inverse();
    return Exact(a_ * ni, -b_ * ni, r_);
  }
  Exact operator/(const Exact& o) const { return *this * o.inverse(); }

  Exact& operator+=(const Exact& o) { return *this = *this + o; }
  Exact& operator-=(const Exact& o) { return *this = *this - o; }
  Exact& operator*=(const Exact& o) { return *this = *this * o; }
  Exact& operator/=(const Exact& o) { return *this = *this / o; }

  bool operator==(const Exact& o) const {
    if (r_ != 0 && o.r_ != 0 && r_ != o.r_) return false;  // independent radicals
    return a_ == o.a_ && b_ == o.b_;
  }
  bool operator!=(const Exact& o) const { return !(*this == o); }

  Exact pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Exact acc(1), base = *this;
    while (e) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // drop the (asserted-zero) extension part, yielding a plain Q(i) value
  QI demote_to_base() const {
    if (!b_.is_zero())
      throw std::logic_error("Exact::demote_to_base: extension coefficient is nonzero");
    return a_;
  }

  std::complex<double> to_complex() const {
    std::complex<double> v = a_.to_complex();
    if (r_ != 0) v += b_.to_complex() * std::sqrt(mpq_class(r_).get_d());
    return v;
  }

  // deterministic ordering usable as a map key
  static int cmp(const Exact& x, const Exact& y) {
    if (int c = ::cmp(mpq_class(x.r_), mpq_class(y.r_))) return c;
    if (int c = ::cmp(x.a_.re, y.a_.re)) return c;
    if (int c = ::cmp(x.a_.im, y.a_.im)) return c;
    if (int c = ::cmp(x.b_.re, y.b_.re)) return c;
    return ::cmp(x.b_.im, y.b_.im);
  }

  std::string str() const;

 private:
  QI a_, b_;
  mpz_class r_;

  void normalize() {
    if (b_.is_zero()) r_ = 0;
    if (r_ == 0 && !b_.is_zero())
      throw std::logic_error("Exact: extension coefficient without a radicand");
  }

  mpz_class unify(const Exact& o) const {
    if (r_ == 0) return o.r_;
    if (o.r_ == 0 || o.r_ == r_) return r_;
    throw std::domain_error("Exact: mixing two different square-root extensions (" +
                            r_.get_str() + " vs " + o.r_.get_str() + ")");
  }
};

inline Exact exact_i() { return Exact(qi_i()); }

// square root; adjoins a radical when the value has none in Q(i).
// Requires a pure-base argument whose radicand (when needed) is real.
inline Exact sqrt_or_adjoin(const Exact& x) {
  if (x.has_ext() && !x.ext_coeff().is_zero())
    throw std::domain_error("sqrt_or_adjoin: argument already carries a radical");
  const QI v = x.base();
  if (auto s = sqrt_in_qi(v)) return Exact(*s);
  if (!v.is_real())
    throw std::domain_error("sqrt_or_adjoin: non-real radicand; use the ball backend");
  // v = sign * n/d, sqrt(|v|) = sqrt(n d)/d = (f/d) sqrt(r)
  const bool neg = sgn(v.re) < 0;
  mpq_class av = neg ? mpq_class(-v.re) : v.re;
  mpz_class m = av.get_num() * av.get_den();
  mpz_class f, r;
  extract_square_part(m, f, r);
  if (r == 1) throw std::logic_error("sqrt_or_adjoin: missed an exact square");
  mpq_class coeff(f, av.get_den());
  coeff.canonicalize();  // the two-arg ctor does not reduce
  QI b = neg ? QI(mpq_class(0), coeff) : QI(coeff);
  return Exact(QI(), b, r);
}

inline std::string qstr(const mpq_class& q) { return q.get_str(); }

inline std::string Exact::str() const {
  std::string s = "(" + qstr(a_.re) + (sgn(a_.im) >= 0 ? "+" : "") + qstr(a_.im) + "i)";
  if (r_ != 0)
    s += "+(" + qstr(b_.re) + (sgn(b_.im) >= 0 ? "+" : "") + qstr(b_.im) + "i)*sqrt(" +
         r_.get_str() + ")";
  return s;
}

struct ExactLess {
  bool operator()(const Exact& x, const Exact& y) const { return Exact::cmp(x, y) < 0; }
};

}  // namespace trec
