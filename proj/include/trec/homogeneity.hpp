#pragma once
// Finite-difference test of the Euler equation for the R-matrix.
//
// A semisimple CohFT is homogeneous exactly when its R-matrix satisfies
//   (xi d/dxi + sum_i u_i d/du_i) R(xi, u) = 0,
// order by order in xi:  m R[m] + sum_i u_i dR[m]/du_i = 0.  The inverse
// series Rinv(xi) = R(-xi)^T satisfies the same equation, so the check runs
// on the Rinv coefficients the extractor already produces.
//
// The caller supplies a one-parameter flow s -> curve(s) chosen so that every
// canonical coordinate scales linearly, u_i(s) = (1+s) u_i(0).  The chain
// rule then turns sum_i u_i d/du_i into d/ds at s = 0, and a central
// difference approximates it with an O(h^2) error:
//   res(h) = max_{m,a,b} | m Rinv[m]_{ab}(0)
//                          + (Rinv[m]_{ab}(h) - Rinv[m]_{ab}(-h)) / (2h) |.
// When the Euler equation holds, res(h) decays quadratically under step
// halving (ratio about 4); for a flow along which the matrix is constant
// (Airy translations, R = I) every residual entry vanishes identically; a
// flow that fails to scale the u_i linearly stalls at a nonzero residual.
//
// On the exact backend the steps stay rational, so a flow that keeps the
// ramification points rational (for the discrete-surfaces family, scaling
// t2 by (1+s)^2) makes every residual entry an exact Gaussian rational.

#include <functional>
#include <stdexcept>
#include <vector>

#include "trec/rmatrix.hpp"

namespace trec {

// Rinv coefficient stack: entry [m][row][col] is the s^m coefficient
template <class S>
using MatSeries = std::vector<std::vector<std::vector<S>>>;

template <class S>
MatSeries<S> rinv_series(const Curve<S>& cv, long order) {
  Extractor<S> ex(cv);
  RMatrix<S> rm(ex, order);
  const size_t np = rm.points();
  MatSeries<S> out(order + 1, std::vector<std::vector<S>>(np, std::vector<S>(np, S(0))));
  for (long m = 0; m <= order; ++m)
    for (size_t a = 0; a < np; ++a)
      for (size_t b = 0; b < np; ++b) out[m][a][b] = rm.rinv(m, a, b);
  return out;
}

struct EulerReport {
  std::vector<double> step;      // h, halved row by row
  std::vector<double> residual;  // max finite-difference residual at that h
  std::vector<double> ratio;     // residual[k] / residual[k+1]; ~4 when quadratic
  bool identically_zero = true;  // every residual entry vanished structurally
};

// generic core; rinv_at(s) must return stacks of one fixed shape
template <class S>
EulerReport euler_homogeneity_check(const std::function<MatSeries<S>(const mpq_class&)>& rinv_at,
                                    const mpq_class& step0, int halvings) {
  if (sgn(step0) <= 0) throw std::invalid_argument("euler check: step must be positive");
  if (halvings < 0) throw std::invalid_argument("euler check: halvings must be nonnegative");
  const MatSeries<S> base = rinv_at(mpq_class(0));
  EulerReport rep;
  mpq_class h = step0;
  for (int k = 0; k <= halvings; ++k, h /= 2) {
    const MatSeries<S> up = rinv_at(h), dn = rinv_at(-h);
    if (up.size() != base.size() || dn.size() != base.size())
      throw std::logic_error("euler check: order changed along the flow");
    const S scale = s_from_q<S>(mpq_class(1) / (2 * h));
    double worst = 0.0;
    for (size_t m = 0; m < base.size(); ++m) {
      if (up[m].size() != base[m].size() || dn[m].size() != base[m].size())
        throw std::logic_error("euler check: ramification profile changed along the flow");
      for (size_t a = 0; a < base[m].size(); ++a)
        for (size_t b = 0; b < base[m][a].size(); ++b) {
          S res = s_from_q<S>(mpq_class((long)m)) * base[m][a][b] +
                  scale * (up[m][a][b] - dn[m][a][b]);
          if (!is_exactly_zero(res)) rep.identically_zero = false;
          double v = abs_approx(res);
          if (v > worst) worst = v;
        }
    }
    rep.step.push_back(h.get_d());
    rep.residual.push_back(worst);
  }
  for (size_t k = 0; k + 1 < rep.residual.size(); ++k)
    rep.ratio.push_back(rep.residual[k + 1] > 0.0 ? rep.residual[k] / rep.residual[k + 1] : 0.0);
  return rep;
}

// curve-family convenience: rebuild the extraction at every flow position
template <class S>
EulerReport euler_homogeneity_check(const std::function<Curve<S>(const mpq_class&)>& family,
                                    long order, const mpq_class& step0, int halvings) {
  std::function<MatSeries<S>(const mpq_class&)> at = [&](const mpq_class& s) {
    return rinv_series(family(s), order);
  };
  return euler_homogeneity_check<S>(at, step0, halvings);
}

}  // namespace trec
