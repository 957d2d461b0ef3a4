#pragma once
// Rational functions in one variable: exact reduction, local Laurent expansion
// around finite points and infinity, and partial fractions over a supplied
// pole list (erroring out loudly if the list misses a pole).

#include <utility>
#include <vector>

#include "trec/series.hpp"

namespace trec {

template <class S>
struct RatF {
  Poly<S> num, den;

  RatF() : num(), den(Poly<S>::constant(S(1))) {}
  RatF(Poly<S> n, Poly<S> d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero()) throw std::domain_error("RatF: zero denominator");
    reduce();
  }
  static RatF from_poly(Poly<S> p) { return RatF(std::move(p), Poly<S>::constant(S(1))); }
  static RatF constant(const S& v) { return from_poly(Poly<S>::constant(v)); }
  static RatF x() { return from_poly(Poly<S>::x()); }

  void reduce() {
    if constexpr (scalar_traits<S>::exact) {
      if (num.is_zero()) {
        den = Poly<S>::constant(S(1));
        return;
      }
      Poly<S> g = poly_gcd(num, den);
      if (g.deg() > 0) {
        Poly<S> q, r;
        divrem(num, g, q, r);
        num = q;
        divrem(den, g, q, r);
        den = q;
      }
      S lead = den.c.back();
      if (!(lead == S(1))) {
        S il = inv_of(lead);
        num = il * num;
        den = il * den;
      }
    }
  }

  bool is_zero() const { return num.is_zero(); }

  RatF operator-() const { return RatF(-num, den); }
  friend RatF operator+(const RatF& a, const RatF& b) {
    return RatF(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend RatF operator-(const RatF& a, const RatF& b) { return a + (-b); }
  friend RatF operator*(const RatF& a, const RatF& b) { return RatF(a.num * b.num, a.den * b.den); }
  friend RatF operator/(const RatF& a, const RatF& b) {
    if (b.is_zero()) throw std::domain_error("RatF: division by zero");
    return RatF(a.num * b.den, a.den * b.num);
  }
  friend RatF operator*(const S& s, const RatF& a) {
    return RatF(Poly<S>::constant(s) * a.num, a.den);
  }
  RatF& operator+=(const RatF& o) { return *this = *this + o; }
  RatF& operator-=(const RatF& o) { return *this = *this - o; }
  RatF& operator*=(const RatF& o) { return *this = *this * o; }

  RatF derivative() const {
    return RatF(num.derivative() * den - num * den.derivative(), den * den);
  }

  S eval(const S& z) const {
    S d = den.eval(z);
    return num.eval(z) * inv_of(d);
  }

  // Laurent expansion in v where z = c + v, window [val, val+len)
  Laurent<S> expand_at(const S& c, long len) const {
    if (num.is_zero()) return Laurent<S>::zero(len);
    Poly<S> ns = num.shifted(c), ds = den.shifted(c);
    long vd = low_valuation(ds), vn = low_valuation(ns);
    Laurent<S> ln = Laurent<S>::from(0, ns.c);
    Laurent<S> ld = Laurent<S>::from(0, ds.c).truncated(len + vd + 1);
    return (ln * ld.inverse()).truncated(vn - vd + len);
  }

  // expansion at infinity in u = 1/z (so z^k -> u^{-k})
  Laurent<S> expand_at_infinity(long len) const {
    if (num.is_zero()) return Laurent<S>::zero(len);
    std::vector<S> rn(num.c.rbegin(), num.c.rend()), rd(den.c.rbegin(), den.c.rend());
    long dn = num.deg(), dd = den.deg();
    Laurent<S> ln = Laurent<S>::from(-dn, rn);
    // den is an exact polynomial, so any finite window is a sound truncation
    Laurent<S> ld = Laurent<S>::from(-dd, rd).truncated(len + 2 * dd + dn + 4);
    return (ln * ld.inverse()).truncated((dd - dn) + len);
  }

  S residue_at(const S& c) const { return expand_at(c, 4).coeff(-1); }
  S residue_at_infinity() const {
    // Res_inf f dz = -[u^1] of f(1/u) ... with dz = -du/u^2
    Laurent<S> e = expand_at_infinity(6);
    return -e.coeff(1);
  }

  long pole_order_at(const S& c) const {
    Poly<S> ds = den.shifted(c);
    Poly<S> ns = num.shifted(c);
    if (num.is_zero()) return 0;
    long v = low_valuation(ds) - low_valuation(ns);
    return v > 0 ? v : 0;
  }

 private:
  static long low_valuation(const Poly<S>& p) {
    long v = 0;
    while (v < (long)p.c.size() && is_exactly_zero(p.c[v])) ++v;
    return v;
  }
};

// exact partial fractions over a supplied pole list
template <class S>
struct PartialFractions {
  Poly<S> poly;                     // polynomial part
  std::vector<std::vector<S>> pp;   // pp[i][k-1]: coefficient of (z - c_i)^{-k}
};

template <class S>
PartialFractions<S> partial_fractions(const RatF<S>& f, const std::vector<S>& poles) {
  static_assert(scalar_traits<S>::exact, "partial_fractions needs exact scalars");
  PartialFractions<S> out;
  out.pp.resize(poles.size());
  RatF<S> rest = f;
  for (size_t i = 0; i < poles.size(); ++i) {
    long m = f.pole_order_at(poles[i]);
    out.pp[i].assign(m, S(0));
    if (m == 0) continue;
    Laurent<S> e = f.expand_at(poles[i], m + 1);
    RatF<S> ppf;
    for (long k = 1; k <= m; ++k) {
      S ck = e.coeff(-k);
      out.pp[i][k - 1] = ck;
      // ck / (z - c)^k
      Poly<S> d = Poly<S>::constant(S(1));
      Poly<S> lin(std::vector<S>{-poles[i], S(1)});
      for (long j = 0; j < k; ++j) d = d * lin;
      ppf += RatF<S>(Poly<S>::constant(ck), d);
    }
    rest -= ppf;
  }
  if (rest.den.deg() != 0)
    throw std::runtime_error("partial_fractions: pole list does not account for all poles");
  out.poly = inv_of(rest.den.c.back()) * rest.num;
  return out;
}

}  // namespace trec
