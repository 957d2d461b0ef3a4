#pragma once
// Named superpotential families and their spectral curves.
//
// Each family carries the superpotential lambda(p) as a rational function of
// the global coordinate, its partial derivatives along the flat coordinates
// (taken at fixed p), and the Euler data (exponents q_alpha with q = 0 on the
// unit direction, and the conformal dimension d).  That is exactly the input
// the residue pairings and the canonical frame need; the topological-recursion
// side reuses lambda as x together with a choice of dy.
//
// Parameter conventions:
//  - discrete_surfaces(t1, t2):  lambda = t1 + p + t2/p,  E = t1 d1 + 2 t2 d2.
//  - cp1(t1, b):                 lambda = t1 + b (p + 1/p) with b = e^{t2/2};
//    passing b instead of t2 keeps rational parameter values exact.
//  - hypermap(n, a):             lambda = p^n + a2 p^{n-2} + ... + a_n
//                                         + a_{n+1}/(p - a1), unit = d/da_n.
//  - a2(tau1, tau2):             lambda = p^3 + tau1 p + tau2 in the flat
//    order (t0, t1) = (tau2, tau1), unit = d/dt0.

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trec/curve.hpp"
#include "trec/extract.hpp"

namespace trec {

template <class S>
struct LGFamily {
  std::string name;
  RatF<S> lam;                    // superpotential lambda(p)
  std::vector<RatF<S>> dlam;      // d lambda / d t_alpha at fixed p
  std::vector<S> extra_poles;     // finite poles of lambda (never critical)
  std::vector<mpq_class> q;       // Euler exponents, q[unit] = 0
  mpq_class conf_dim;             // conformal dimension d
  size_t unit = 0;                // index of the unit flat direction

  size_t rank() const { return dlam.size(); }
};

template <class S>
LGFamily<S> lg_discrete_surfaces(const S& t1, const S& t2) {
  using P = Poly<S>;
  using R = RatF<S>;
  LGFamily<S> f;
  f.name = "discrete_surfaces";
  f.lam = R(P(std::vector<S>{t2, t1, S(1)}), P::x());
  f.dlam = {R::constant(S(1)), R(P::constant(S(1)), P::x())};
  f.extra_poles = {S(0)};
  f.q = {mpq_class(0), mpq_class(-1)};
  f.conf_dim = mpq_class(-1);
  return f;
}

template <class S>
LGFamily<S> lg_cp1(const S& t1, const S& b) {
  using P = Poly<S>;
  using R = RatF<S>;
  LGFamily<S> f;
  f.name = "cp1";
  f.lam = R(P(std::vector<S>{b, t1, b}), P::x());
  // the t2-direction at fixed p: d lambda / d t2 = (b/2)(p + 1/p)
  S h = b * s_from_q<S>(mpq_class(1, 2));
  f.dlam = {R::constant(S(1)), R(P(std::vector<S>{h, S(0), h}), P::x())};
  f.extra_poles = {S(0)};
  f.q = {mpq_class(0), mpq_class(1)};
  f.conf_dim = mpq_class(1);
  return f;
}

template <class S>
LGFamily<S> lg_hypermap(long n, const std::vector<S>& a) {
  using P = Poly<S>;
  using R = RatF<S>;
  if (n < 1 || (long)a.size() != n + 1)
    throw std::invalid_argument("lg_hypermap: needs n >= 1 and n+1 parameters");
  LGFamily<S> f;
  f.name = "hypermap";
  std::vector<S> body(n + 1, S(0));  // p^n + a2 p^{n-2} + ... + a_n
  body[n] = S(1);
  for (long k = 2; k <= n; ++k) body[n - k] = a[k - 1];
  P lin(std::vector<S>{-a[0], S(1)});  // p - a1
  f.lam = R(P(body) * lin + P::constant(a[n]), lin);
  f.dlam.resize(n + 1);
  f.dlam[0] = R(P::constant(a[n]), lin * lin);
  for (long k = 2; k <= n; ++k) {
    std::vector<S> mono(n - k + 1, S(0));
    mono[n - k] = S(1);
    f.dlam[k - 1] = R::from_poly(P(std::move(mono)));
  }
  f.dlam[n] = R(P::constant(S(1)), lin);
  f.extra_poles = {a[0]};
  for (long i = 1; i <= n + 1; ++i) {
    mpq_class w(i, n);
    w.canonicalize();
    f.q.push_back(mpq_class(1) - w);
  }
  f.conf_dim = mpq_class(n - 2, n);
  f.conf_dim.canonicalize();
  f.unit = (size_t)(n - 1);
  return f;
}

template <class S>
LGFamily<S> lg_a2(const S& tau1, const S& tau2) {
  using P = Poly<S>;
  using R = RatF<S>;
  LGFamily<S> f;
  f.name = "a2";
  f.lam = R::from_poly(P(std::vector<S>{tau2, tau1, S(0), S(1)}));
  f.dlam = {R::constant(S(1)), R::x()};
  f.extra_poles = {};
  f.q = {mpq_class(0), mpq_class(1, 3)};
  f.conf_dim = mpq_class(1, 3);
  return f;
}

// --- spectral-curve builders -----------------------------------------------

template <class S>
Curve<S> curve_airy() {
  using P = Poly<S>;
  using R = RatF<S>;
  Curve<S> cv;
  cv.x = R(P(std::vector<S>{S(0), S(0), s_from_q<S>(mpq_class(1, 2))}), P::constant(S(1)));
  cv.dy = R::constant(S(1));
  cv.crit = {S(0)};
  return cv;
}

// y = p; the two ramification points sit at +-sqrt(t2)
template <class S>
Curve<S> curve_discrete_surfaces(const S& t1, const S& t2) {
  Curve<S> cv;
  cv.x = lg_discrete_surfaces(t1, t2).lam;
  cv.dy = RatF<S>::constant(S(1));
  S s = sqrt_scalar(t2);
  cv.crit = {s, -s};
  return cv;
}

// y = log p, so dy = dp/p; ramification at p = +-1 for every (t1, b)
template <class S>
Curve<S> curve_cp1(const S& t1, const S& b) {
  Curve<S> cv;
  cv.x = lg_cp1(t1, b).lam;
  cv.dy = RatF<S>(Poly<S>::constant(S(1)), Poly<S>::x());
  cv.crit = {S(1), S(-1)};
  return cv;
}

// x = p^{n+1} + tau_1 p^{n-1} + ... + tau_n, y = p.  The ramification points
// are the caller's business (they are algebraic in the taus in general).
template <class S>
Curve<S> curve_a_n(const std::vector<S>& taus, std::vector<S> crit) {
  long n = (long)taus.size();
  std::vector<S> cf(n + 2, S(0));
  cf[n + 1] = S(1);
  for (long k = 1; k <= n; ++k) cf[n + 1 - k - 1] = taus[k - 1];
  Curve<S> cv;
  cv.x = RatF<S>::from_poly(Poly<S>(std::move(cf)));
  cv.dy = RatF<S>::constant(S(1));
  cv.crit = std::move(crit);
  return cv;
}

template <class S>
Curve<S> curve_hypermap(long n, const std::vector<S>& a, std::vector<S> crit) {
  Curve<S> cv;
  cv.x = lg_hypermap(n, a).lam;
  cv.dy = RatF<S>::constant(S(1));
  cv.crit = std::move(crit);
  return cv;
}

// x = p^{n+1} + eps p: the deformation whose eps -> 0 limit degenerates the
// n+1 simple ramification points onto the origin.  Numeric backend only (the
// ramification points are the n-th roots of -eps/(n+1)).
inline Curve<CB> curve_be(long n, const CB& eps) {
  std::vector<CB> taus(n, CB(0));
  taus[n - 1] = eps;
  CB w = -eps * CB(mpq_class(1, n + 1));
  std::vector<CB> crit;
  CB lw = clog(w);
  for (long k = 0; k < n; ++k) {
    CB arg = (lw + CB(RF(0), RF::pi() * RF(2 * k))) * CB(mpq_class(1, n));
    crit.push_back(cexp(arg));
  }
  return curve_a_n<CB>(taus, std::move(crit));
}

}  // namespace trec
