#pragma once
// Dense polynomials and truncated Laurent series over a generic scalar.
//
// Laurent window semantics: coefficients below lo() are exactly zero, the
// window [lo, trunc) is fully known (stored, or zero past the stored block),
// and exponents >= trunc are unknown.  trunc == kLaurentInf marks an exact
// (untruncated) object.  Asking for an unknown coefficient throws, so order
// bookkeeping failures surface loudly instead of producing wrong numbers.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "trec/scalar.hpp"

namespace trec {

constexpr long kLaurentInf = 1L << 40;

// ---------------------------------------------------------------- polynomials

template <class S>
struct Poly {
  std::vector<S> c;  // ascending powers; empty == zero polynomial

  Poly() = default;
  explicit Poly(std::vector<S> cc) : c(std::move(cc)) { trim(); }
  static Poly constant(const S& v) { return Poly(std::vector<S>{v}); }
  static Poly x() { return Poly(std::vector<S>{S(0), S(1)}); }

  void trim() {
    while (!c.empty() && is_exactly_zero(c.back())) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  long deg() const { return (long)c.size() - 1; }  // -1 for zero
  const S coeff(long k) const { return (k >= 0 && k < (long)c.size()) ? c[k] : S(0); }

  Poly operator-() const {
    Poly r = *this;
    for (auto& v : r.c) v = -v;
    return r;
  }
  friend Poly operator+(const Poly& a, const Poly& b) {
    Poly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), S(0));
    for (size_t k = 0; k < r.c.size(); ++k) r.c[k] = a.coeff(k) + b.coeff(k);
    r.trim();
    return r;
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly r;
    r.c.assign(a.c.size() + b.c.size() - 1, S(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
  }
  friend bool operator==(const Poly& a, const Poly& b) { return (a - b).is_zero(); }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  friend Poly operator*(const S& s, const Poly& a) {
    Poly r = a;
    for (auto& v : r.c) v = s * v;
    r.trim();
    return r;
  }

  Poly derivative() const {
    Poly r;
    for (size_t k = 1; k < c.size(); ++k) r.c.push_back(S((long)k) * c[k]);
    r.trim();
    return r;
  }

  S eval(const S& x0) const {
    S acc(0);
    for (size_t k = c.size(); k-- > 0;) acc = acc * x0 + c[k];
    return acc;
  }

  // Taylor shift: coefficients of p(x0 + t) in t
  Poly shifted(const S& x0) const {
    Poly r;
    r.c.assign(std::max<size_t>(c.size(), 1), S(0));
    // Horner on (x0 + t): acc <- acc*(x0+t) + c[k]
    std::vector<S> acc{S(0)};
    for (size_t k = c.size(); k-- > 0;) {
      std::vector<S> nxt(acc.size() + 1, S(0));
      for (size_t j = 0; j < acc.size(); ++j) {
        nxt[j] += acc[j] * x0;
        nxt[j + 1] += acc[j];
      }
      nxt[0] += c[k];
      acc = std::move(nxt);
    }
    r.c = std::move(acc);
    r.trim();
    return r;
  }

  // division with remainder over a field; requires exact scalars for pivots
  friend void divrem(const Poly& a, const Poly& b, Poly& q, Poly& r) {
    if (b.is_zero()) throw std::domain_error("Poly divrem by zero");
    q = Poly();
    r = a;
    S lead = b.c.back();
    S ilead = inv_of(lead);
    while (!r.is_zero() && r.deg() >= b.deg()) {
      long d = r.deg() - b.deg();
      S f = r.c.back() * ilead;
      if ((long)q.c.size() < d + 1) q.c.resize(d + 1, S(0));
      q.c[d] += f;
      for (long k = 0; k <= b.deg(); ++k) r.c[k + d] -= f * b.c[k];
      r.c.pop_back();
      r.trim();
    }
    q.trim();
  }

  Poly monic() const {
    if (is_zero()) return *this;
    S i = inv_of(c.back());
    return i * *this;
  }
};

template <class S>
Poly<S> poly_gcd(Poly<S> a, Poly<S> b) {
  static_assert(scalar_traits<S>::exact, "poly_gcd needs exact scalars");
  a = a.monic();
  b = b.monic();
  while (!b.is_zero()) {
    Poly<S> q, r;
    divrem(a, b, q, r);
    a = std::move(b);
    b = r.monic();
  }
  return a;
}

// ------------------------------------------------------------- Laurent series

template <class S>
class Laurent {
 public:
  Laurent() : lo_(0), trunc_(kLaurentInf) {}  // exact zero

  static Laurent zero(long trunc = kLaurentInf) {
    Laurent z;
    z.trunc_ = trunc;
    return z;
  }
  static Laurent from(long lo, std::vector<S> cc, long trunc = kLaurentInf) {
    Laurent r;
    r.lo_ = lo;
    r.c_ = std::move(cc);
    r.trunc_ = trunc;
    r.normalize();
    return r;
  }
  static Laurent monomial(const S& v, long k, long trunc = kLaurentInf) {
    return from(k, {v}, trunc);
  }
  static Laurent from_poly(const Poly<S>& p, long trunc = kLaurentInf) {
    return from(0, p.c, trunc);
  }

  long lo() const { return lo_; }
  long trunc() const { return trunc_; }
  bool known_zero() const { return c_.empty(); }  // zero on the whole window
  long stored_end() const { return lo_ + (long)c_.size(); }

  // valuation of a provably nonzero series (exact backend trims exact zeros)
  long val() const {
    if (c_.empty()) throw std::logic_error("Laurent::val of zero window");
    return lo_;
  }

  S coeff(long k) const {
    if (k >= trunc_)
      throw std::out_of_range("Laurent::coeff " + std::to_string(k) +
                              " beyond truncation " + std::to_string(trunc_));
    if (k < lo_ || k >= stored_end()) return S(0);
    return c_[k - lo_];
  }
  S residue() const { return coeff(-1); }

  Laurent operator-() const {
    Laurent r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  friend Laurent operator+(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.trunc_ = std::min(a.trunc_, b.trunc_);
    if (a.c_.empty() && b.c_.empty()) return r;
    long lo = a.c_.empty() ? b.lo_ : (b.c_.empty() ? a.lo_ : std::min(a.lo_, b.lo_));
    long end = std::min(std::max(a.stored_end(), b.stored_end()), r.trunc_);
    if (end <= lo) return r;
    r.lo_ = lo;
    r.c_.assign(end - lo, S(0));
    for (long k = lo; k < end; ++k) r.c_[k - lo] = a.coeff_clipped(k) + b.coeff_clipped(k);
    r.normalize();
    return r;
  }
  friend Laurent operator-(const Laurent& a, const Laurent& b) { return a + (-b); }

  friend Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    if (a.c_.empty() || b.c_.empty()) {
      // product with a zero window: zero, known to the best provable order
      long t = kLaurentInf;
      if (a.c_.empty() && a.trunc_ < kLaurentInf)
        t = std::min(t, a.trunc_ + (b.c_.empty() ? 0 : b.lo_));
      if (b.c_.empty() && b.trunc_ < kLaurentInf) t = std::min(t, b.trunc_ + (a.c_.empty() ? 0 : a.lo_));
      r.trunc_ = t;
      return r;
    }
    r.trunc_ = std::min(a.trunc_ == kLaurentInf ? kLaurentInf : a.trunc_ + b.lo_,
                        b.trunc_ == kLaurentInf ? kLaurentInf : b.trunc_ + a.lo_);
    r.lo_ = a.lo_ + b.lo_;
    long end = std::min((long)(a.stored_end() + b.stored_end() - 1), r.trunc_);
    if (end <= r.lo_) {
      r.c_.clear();
      return r;
    }
    r.c_.assign(end - r.lo_, S(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) {
        long k = a.lo_ + (long)i + b.lo_ + (long)j;
        if (k < end) r.c_[k - r.lo_] += a.c_[i] * b.c_[j];
      }
    r.normalize();
    return r;
  }
  friend Laurent operator*(const S& s, const Laurent& a) {
    Laurent r = a;
    for (auto& v : r.c_) v = s * v;
    r.normalize();
    return r;
  }

  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent& operator-=(const Laurent& o) { return *this = *this - o; }
  Laurent& operator*=(const Laurent& o) { return *this = *this * o; }

  Laurent shifted_exp(long d) const {
    Laurent r = *this;
    r.lo_ += d;
    if (r.trunc_ < kLaurentInf) r.trunc_ += d;
    return r;
  }

  Laurent truncated(long t) const {
    Laurent r = *this;
    r.trunc_ = std::min(r.trunc_, t);
    if (r.stored_end() > r.trunc_) {
      long keep = r.trunc_ - r.lo_;
      if (keep <= 0)
        r.c_.clear();
      else
        r.c_.resize(keep);
    }
    r.normalize();
    return r;
  }

  Laurent derivative() const {
    Laurent r;
    r.trunc_ = trunc_ == kLaurentInf ? kLaurentInf : trunc_ - 1;
    if (c_.empty()) return r;
    r.lo_ = lo_ - 1;
    r.c_.assign(c_.size(), S(0));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = S(lo_ + (long)i) * c_[i];
    r.normalize();
    return r;
  }

  // termwise antiderivative; the exponent -1 coefficient must vanish
  Laurent antiderivative() const {
    if (trunc_ <= -1) throw std::out_of_range("Laurent::antiderivative: window below -1");
    if (!negligible(coeff_clipped(-1), 1e-40))
      throw std::domain_error("Laurent::antiderivative: nonzero residue");
    Laurent r;
    r.trunc_ = trunc_ == kLaurentInf ? kLaurentInf : trunc_ + 1;
    if (c_.empty()) return r;
    r.lo_ = lo_ + 1;
    r.c_.assign(c_.size(), S(0));
    for (size_t i = 0; i < c_.size(); ++i) {
      long k = lo_ + (long)i;
      if (k == -1) continue;
      r.c_[i] = c_[i] * inv_of(S(k + 1));
    }
    r.normalize();
    return r;
  }

  // multiplicative inverse; lowest stored coefficient must be invertible.
  // The inverse of a unit series is an infinite object, so a finite window is
  // required: truncate() exact inputs before inverting.
  Laurent inverse() const {
    if (c_.empty()) throw std::domain_error("Laurent::inverse of zero");
    if (trunc_ == kLaurentInf)
      throw std::domain_error("Laurent::inverse needs a finite window; truncate first");
    long v = lo_;
    long n = trunc_ - v;
    std::vector<S> F(n, S(0));
    for (long k = 0; k < n; ++k) F[k] = coeff_clipped(v + k);
    std::vector<S> G(n, S(0));
    S i0 = inv_of(F[0]);
    G[0] = i0;
    for (long k = 1; k < n; ++k) {
      S acc(0);
      for (long j = 1; j <= k; ++j)
        if (j < (long)F.size()) acc += F[j] * G[k - j];
      G[k] = -(i0 * acc);
    }
    long t = trunc_ == kLaurentInf ? kLaurentInf : trunc_ - 2 * v;
    return Laurent::from(-v, std::move(G), t);
  }

  friend Laurent operator/(const Laurent& a, const Laurent& b) { return a * b.inverse(); }

  // compose(outer=this, inner): inner must have valuation >= 1
  Laurent compose(const Laurent& inner) const {
    if (inner.c_.empty()) {
      if (lo_ >= 0) return Laurent::monomial(coeff_clipped(0), 0, inner.trunc_);
      throw std::domain_error("Laurent::compose: inner zero with negative powers");
    }
    long vi = inner.lo_;
    if (vi < 1) throw std::domain_error("Laurent::compose: inner valuation < 1");
    long hi = stored_end();
    long t = kLaurentInf;
    if (trunc_ < kLaurentInf) t = std::min(t, vi * trunc_);
    if (inner.trunc_ < kLaurentInf)
      t = std::min(t, inner.trunc_ + (std::min(lo_, 1l) - 1) * vi);
    // nonnegative part via Horner (down to k=0 so a positive valuation of the
    // outer series still contributes its inner^lo factor)
    Laurent acc = Laurent::zero(t);
    for (long k = hi - 1; k >= 0; --k) {
      acc = (acc * inner).truncated(t);
      acc += Laurent::monomial(coeff_clipped(k), 0, t);
    }
    // negative part: explicit powers of 1/inner (exponents stay small here)
    if (lo_ < 0) {
      Laurent inv = inner.inverse();
      Laurent p = inv;
      for (long j = -1; j >= lo_; --j) {
        acc += (coeff_clipped(j) * p).truncated(t);
        if (j - 1 >= lo_) p = (p * inv).truncated(t);
      }
    }
    return acc.truncated(t);
  }

  // functional inverse of a valuation-1 series
  Laurent reversion() const {
    if (c_.empty() || lo_ != 1) throw std::domain_error("Laurent::reversion needs valuation 1");
    long t = trunc_;
    if (t == kLaurentInf) throw std::domain_error("Laurent::reversion needs a finite window");
    Laurent x = Laurent::monomial(S(1), 1, t);
    Laurent g = inv_of(c_[0]) * x;
    Laurent fp = derivative();
    int iters = 4;
    for (long w = 2; w < t; w *= 2) ++iters;  // Newton doubles the valid window
    for (int it = 0; it < iters; ++it) {
      Laurent err = (compose(g) - x).truncated(t);
      if (err.known_zero()) break;
      Laurent corr = err * compose_inner(fp, g).inverse();
      g = (g - corr).truncated(t);
    }
    // final verification: compose back and demand the identity on the window
    Laurent check = (compose(g) - x).truncated(t);
    if (!check.window_negligible(1e-30))
      throw std::runtime_error("Laurent::reversion failed to verify");
    return g;
  }

  bool window_negligible(double tol) const {
    for (auto& v : c_)
      if (!negligible(v, tol)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0;
    for (auto& v : c_) m = std::max(m, abs_approx(v));
    return m;
  }

  std::string str() const {
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
      s += std::to_string(lo_ + (long)i) + ": " + scalar_str(c_[i]);
      if (i + 1 < c_.size()) s += ", ";
    }
    s += "] trunc=" + (trunc_ == kLaurentInf ? std::string("inf") : std::to_string(trunc_));
    return s;
  }

  S coeff_clipped(long k) const {  // like coeff but 0 beyond truncation (internal)
    if (k < lo_ || k >= stored_end()) return S(0);
    return c_[k - lo_];
  }

 private:
  long lo_;
  long trunc_;
  std::vector<S> c_;

  static Laurent compose_inner(const Laurent& outer, const Laurent& inner) {
    return outer.compose(inner);
  }

  void normalize() {
    // drop provably-zero edges; keep window semantics intact
    size_t a = 0;
    while (a < c_.size() && is_exactly_zero(c_[a])) ++a;
    if (a > 0) {
      c_.erase(c_.begin(), c_.begin() + a);
      lo_ += (long)a;
    }
    while (!c_.empty() && is_exactly_zero(c_.back())) c_.pop_back();
    if (c_.empty()) lo_ = 0;
    if (!c_.empty() && stored_end() > trunc_)
      throw std::logic_error("Laurent: stored window exceeds truncation");
  }
};

// sqrt(1 + s) for a series s of positive valuation (Newton; any backend)
template <class S>
Laurent<S> sqrt_one_plus(const Laurent<S>& s) {
  long t = s.trunc();
  if (t == kLaurentInf)
    throw std::domain_error("sqrt_one_plus needs a finite window; truncate first");
  if (!s.known_zero() && s.val() < 1)
    throw std::domain_error("sqrt_one_plus: argument must have positive valuation");
  Laurent<S> f = Laurent<S>::monomial(S(1), 0, t) + s;
  Laurent<S> y = Laurent<S>::monomial(S(1), 0, t);
  S half = inv_of(S(2));
  int iters = 4;
  for (long w = 2; w < t; w *= 2) ++iters;  // Newton doubles the valid window
  for (int it = 0; it < iters; ++it) {
    Laurent<S> next = (half * (y + f * y.inverse())).truncated(t);
    Laurent<S> diff = next - y;
    y = next;
    if (diff.known_zero()) break;
  }
  return y;
}

}  // namespace trec
