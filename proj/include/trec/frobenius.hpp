#pragma once
// Frobenius-manifold data computed from a superpotential family by residues.
//
// The flat metric and the three-point structure constants are residue sums
// over the critical points of lambda:
//
//   eta(d_a, d_b)      = sum_crit Res (d_a lambda)(d_b lambda) / lambda'  dp
//   c(d_a, d_b, d_c)   = sum_crit Res (d_a lambda)(d_b lambda)(d_c lambda)
//                                     / lambda'  dp
//
// with the partials taken at fixed p.  Rather than expanding at the critical
// points (which are algebraic in the parameters in general), we evaluate the
// sum by the total-residue theorem: it equals minus the residues at the
// remaining finite poles of the integrand minus the residue at infinity, all
// of which sit at parameter-rational points.  The orientation above is the
// one that reproduces the third derivatives of the prepotentials; see the
// tests for the closed-form cross-checks.
//
// The canonical frame packages the critical values u_i, the Hessians
// Delta_i = lambda''(p_i), the transition matrix Psi_{i,alpha} =
// Delta_i^{-1/2} (d lambda/d t_alpha)(p_i) between flat and normalized
// canonical bases (principal square-root branch), the exponents
// mu_alpha = q_alpha - d/2, and V = Psi mu Psi^{-1}.

#include <functional>
#include <stdexcept>
#include <vector>

#include "trec/presets.hpp"

namespace trec {

// residue of f dz at a finite point, sized to the actual pole order
template <class S>
S residue_at_point(const RatF<S>& f, const S& c) {
  static_assert(scalar_traits<S>::exact, "residue extraction needs exact scalars");
  long k = f.pole_order_at(c);
  if (k <= 0) return S(0);
  return f.expand_at(c, k + 2).coeff(-1);
}

// residue of f dz at infinity, safe for any degree of f
template <class S>
S residue_at_inf(const RatF<S>& f) {
  static_assert(scalar_traits<S>::exact, "residue extraction needs exact scalars");
  if (f.is_zero()) return S(0);
  long m = f.num.deg() - f.den.deg();
  long len = m + 3 > 6 ? m + 3 : 6;
  return -f.expand_at_infinity(len).coeff_clipped(1);
}

// sum over critical points of Res (prod of dlam factors)/lambda' dp,
// evaluated through the total-residue theorem
template <class S>
S lg_residue_pairing(const LGFamily<S>& fam, const std::vector<size_t>& dirs) {
  RatF<S> f = RatF<S>::constant(S(1));
  for (size_t a : dirs) f *= fam.dlam.at(a);
  f = f / fam.lam.derivative();
  S acc = S(0);
  for (const S& p : fam.extra_poles) acc += residue_at_point(f, p);
  return -acc - residue_at_inf(f);
}

template <class S>
S residue_metric(const LGFamily<S>& fam, size_t a, size_t b) {
  return lg_residue_pairing(fam, {a, b});
}

template <class S>
S residue_three_point(const LGFamily<S>& fam, size_t a, size_t b, size_t c) {
  return lg_residue_pairing(fam, {a, b, c});
}

template <class S>
std::vector<std::vector<S>> residue_metric_matrix(const LGFamily<S>& fam) {
  size_t n = fam.rank();
  std::vector<std::vector<S>> g(n, std::vector<S>(n, S(0)));
  for (size_t a = 0; a < n; ++a)
    for (size_t b = a; b < n; ++b) g[a][b] = g[b][a] = residue_metric(fam, a, b);
  return g;
}

namespace frob_detail {

template <class S>
std::vector<std::vector<S>> mat_mul(const std::vector<std::vector<S>>& A,
                                    const std::vector<std::vector<S>>& B) {
  size_t n = A.size(), m = B[0].size(), k = B.size();
  std::vector<std::vector<S>> C(n, std::vector<S>(m, S(0)));
  for (size_t i = 0; i < n; ++i)
    for (size_t l = 0; l < k; ++l)
      for (size_t j = 0; j < m; ++j) C[i][j] += A[i][l] * B[l][j];
  return C;
}

template <class S>
std::vector<std::vector<S>> mat_inverse(std::vector<std::vector<S>> A) {
  size_t n = A.size();
  std::vector<std::vector<S>> I(n, std::vector<S>(n, S(0)));
  for (size_t i = 0; i < n; ++i) I[i][i] = S(1);
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && is_exactly_zero(A[piv][col])) ++piv;
    if (piv == n) throw std::domain_error("mat_inverse: singular matrix");
    std::swap(A[piv], A[col]);
    std::swap(I[piv], I[col]);
    S s = inv_of(A[col][col]);
    for (size_t j = 0; j < n; ++j) {
      A[col][j] = s * A[col][j];
      I[col][j] = s * I[col][j];
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = A[r][col];
      if (is_exactly_zero(f)) continue;
      for (size_t j = 0; j < n; ++j) {
        A[r][j] -= f * A[col][j];
        I[r][j] -= f * I[col][j];
      }
    }
  }
  return I;
}

}  // namespace frob_detail

template <class S>
struct CanonicalFrame {
  std::vector<S> u;                  // critical values of lambda
  std::vector<S> delta;              // Hessians lambda''(p_i)
  std::vector<std::vector<S>> psi;   // psi[i][alpha]
  std::vector<mpq_class> mu;         // mu_alpha = q_alpha - d/2
  std::vector<std::vector<S>> V;     // Psi mu Psi^{-1}, antisymmetric
};

template <class S>
CanonicalFrame<S> canonical_frame(const LGFamily<S>& fam, const std::vector<S>& crit) {
  size_t n = fam.rank();
  if (crit.size() != n)
    throw std::invalid_argument("canonical_frame: need one critical point per flat direction");
  CanonicalFrame<S> fr;
  RatF<S> d1 = fam.lam.derivative();
  RatF<S> d2 = d1.derivative();
  fr.psi.assign(n, std::vector<S>(n, S(0)));
  for (size_t i = 0; i < n; ++i) {
    fr.u.push_back(fam.lam.eval(crit[i]));
    fr.delta.push_back(d2.eval(crit[i]));
    S root = sqrt_scalar(fr.delta[i]);
    if (!principal_branch(root)) root = -root;
    S s = inv_of(root);
    for (size_t a = 0; a < n; ++a) fr.psi[i][a] = s * fam.dlam[a].eval(crit[i]);
  }
  for (size_t a = 0; a < n; ++a) fr.mu.push_back(fam.q[a] - fam.conf_dim / 2);
  std::vector<std::vector<S>> pm = fr.psi;
  for (size_t i = 0; i < n; ++i)
    for (size_t a = 0; a < n; ++a) pm[i][a] = pm[i][a] * s_from_q<S>(fr.mu[a]);
  fr.V = frob_detail::mat_mul(pm, frob_detail::mat_inverse(fr.psi));
  return fr;
}

// --- Gauss-Manin checks for the rank-2 families -----------------------------

// Closed-form gradient solution of the Fuchsian system for the two rank-2
// families, phi = (u1-u2)^{-1/2} (sqrt((u2-l)/(u1-l)), s2 * i * sqrt((u1-l)/(u2-l)))
// with s2 = -1 for cp1 and s2 = +1 for discrete surfaces.
template <class S>
std::vector<S> rank2_phi(const S& u1, const S& u2, int s2, const S& lam) {
  S r1 = sqrt_scalar(u1 - lam);
  S r2 = sqrt_scalar(u2 - lam);
  S c = inv_of(sqrt_scalar(u1 - u2));
  S i = sqrt_scalar(S(-1));
  if (!principal_branch(i)) i = -i;
  std::vector<S> phi = {c * r2 * inv_of(r1), S(s2) * i * c * r1 * inv_of(r2)};
  return phi;
}

struct FuchsianReport {
  double ode_residual = 0.0;      // |(U-l) phi' - (1/2 + V) phi|, max entry
  double pairing_residual = 0.0;  // |dp/dl + (1/sqrt 2) phi^T Psi e_unit|
};

// Verify (U - lambda) d phi/d lambda = (1/2 + V) phi at the sample points,
// with the derivative taken by central differences, and the pairing
// dp/d lambda = -(1/sqrt 2) phi^T Psi 1 with dp/d lambda supplied in closed
// form by the caller.  Numeric backend.
inline FuchsianReport fuchsian_check(const CanonicalFrame<CB>& fr, int s2,
                                     const std::vector<CB>& samples,
                                     const std::function<CB(const CB&)>& dp_dlam) {
  FuchsianReport rep;
  RF h = RF(mpq_class(1));
  for (int k = 0; k < 80; ++k) h = h * RF(mpq_class(1, 2));
  CB ch(h, RF(0));
  CB half = CB(mpq_class(1, 2));
  for (const CB& lam : samples) {
    auto hi = rank2_phi<CB>(fr.u[0], fr.u[1], s2, lam + ch);
    auto lo = rank2_phi<CB>(fr.u[0], fr.u[1], s2, lam - ch);
    auto phi = rank2_phi<CB>(fr.u[0], fr.u[1], s2, lam);
    for (size_t i = 0; i < 2; ++i) {
      CB dphi = (hi[i] - lo[i]) * inv_of(CB(RF(2) * h, RF(0)));
      CB lhs = (fr.u[i] - lam) * dphi;
      CB rhs = half * phi[i] + fr.V[i][0] * phi[0] + fr.V[i][1] * phi[1];
      double r = (lhs - rhs).abs_ub();
      if (r > rep.ode_residual) rep.ode_residual = r;
    }
    CB pair = -(phi[0] * fr.psi[0][0] + phi[1] * fr.psi[1][0]) * inv_of(csqrt(CB(2)));
    CB target = dp_dlam(lam);
    double r = (pair - target).abs_ub();
    double ralt = (pair + target).abs_ub();  // chart preimage fixes dp only up to sign
    if (ralt < r) r = ralt;
    if (r > rep.pairing_residual) rep.pairing_residual = r;
  }
  return rep;
}

// Verify the quasi-homogeneity (lambda d/d lambda + sum_i u_i d/d u_i) p =
// ((1-d)/2) p of a closed-form branch p(lambda; u) by central differences.
// Returns the largest residual over the samples.
inline double p_homogeneity_check(
    const std::function<CB(const CB&, const std::vector<CB>&)>& p_of,
    const std::vector<CB>& u, const mpq_class& conf_dim, const std::vector<CB>& samples) {
  RF h = RF(mpq_class(1));
  for (int k = 0; k < 60; ++k) h = h * RF(mpq_class(1, 2));
  CB ch(h, RF(0));
  CB inv2h = inv_of(CB(RF(2) * h, RF(0)));
  double worst = 0.0;
  for (const CB& lam : samples) {
    CB acc = lam * (p_of(lam + ch, u) - p_of(lam - ch, u)) * inv2h;
    for (size_t i = 0; i < u.size(); ++i) {
      std::vector<CB> up = u, dn = u;
      up[i] = up[i] + ch;
      dn[i] = dn[i] - ch;
      acc = acc + u[i] * (p_of(lam, up) - p_of(lam, dn)) * inv2h;
    }
    CB want = CB((mpq_class(1) - conf_dim) / 2) * p_of(lam, u);
    double r = (acc - want).abs_ub();
    if (r > worst) worst = r;
  }
  return worst;
}

}  // namespace trec
