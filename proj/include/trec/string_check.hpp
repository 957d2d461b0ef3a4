#pragma once
// The string equation, checked coefficientwise in the chi basis.
//
// Pairing one leg of omega_{g,n+1} with y by residues at the ramification
// points must reproduce omega_{g,n} with d(./dx) applied to each leg in turn:
//
//   sum_i Res_{z=c_i} y(z) omega_{g,n+1}(z, z_1..z_n)
//     = sum_j d_j ( omega_{g,n}(z_1..z_n) / dx_j ).
//
// The left side only needs Taylor coefficients of y at the c_i: against
// chi_(ell,i) = dz/(z-c_i)^{ell+1} the residue picks [v^ell] y(c_i + v).
// On the right side d(chi_(ell,i)/dx) is again a rational form; it lies in
// the span of the chi's exactly when its partial-fraction expansion has no
// polynomial part and no residues, which is asserted rather than assumed
// (an exact differential decaying at infinity has neither).
//
// Exact scalars only: the right side goes through partial fractions.

#include <map>
#include <stdexcept>
#include <vector>

#include "trec/chi_tensor.hpp"
#include "trec/curve.hpp"
#include "trec/ratfun.hpp"

namespace trec {

// residues of y * omega against the first argument; result has one slot less
template <class S>
ChiTensor<S> string_lhs(const Curve<S>& cv, const ChiTensor<S>& omega_next) {
  if (omega_next.n < 1) throw std::invalid_argument("string_lhs: need at least one slot");
  long lmax = omega_next.max_ell();
  // Taylor coefficients of y at each point: [v^ell] y = [v^{ell-1}] y' / ell
  std::vector<Laurent<S>> dyexp;
  dyexp.reserve(cv.crit.size());
  for (const S& c : cv.crit) dyexp.push_back(cv.dy.expand_at(c, lmax + 2));

  ChiTensor<S> out;
  out.n = omega_next.n - 1;
  for (const auto& [key, c] : omega_next.m)
    for (const auto& [e, mult] : key_counts(key)) {
      (void)mult;  // slot 0 is a fixed slot; no arrangement factor here
      S t = dyexp.at(e.second).coeff_clipped(e.first - 1) * s_from_q<S>(mpq_class(1, e.first));
      if (is_exactly_zero(t)) continue;
      out.add(key_minus(key, {e}), c * t);
    }
  return out;
}

// sum over legs of d(omega/dx): same slot count, ell labels shifted around
template <class S>
ChiTensor<S> string_rhs(const Curve<S>& cv, const ChiTensor<S>& omega) {
  RatF<S> xp = cv.x.derivative();
  // expansion of d(chi_(ell,i)/dx) over the chi basis, computed on demand
  std::map<ChiVar, std::vector<std::pair<ChiVar, S>>> memo;
  auto expand = [&](const ChiVar& e) -> const std::vector<std::pair<ChiVar, S>>& {
    auto it = memo.find(e);
    if (it != memo.end()) return it->second;
    Poly<S> den = Poly<S>::constant(S(1));
    Poly<S> lin(std::vector<S>{-cv.crit.at(e.second), S(1)});
    for (long k = 0; k <= e.first; ++k) den = den * lin;
    RatF<S> f = RatF<S>(Poly<S>::constant(S(1)), den) / xp;
    PartialFractions<S> pf = partial_fractions(f.derivative(), cv.crit);
    if (!pf.poly.is_zero())
      throw std::runtime_error("string_rhs: d(chi/dx) has a polynomial part");
    std::vector<std::pair<ChiVar, S>> row;
    for (size_t j = 0; j < pf.pp.size(); ++j)
      for (size_t k = 1; k <= pf.pp[j].size(); ++k) {
        S ck = pf.pp[j][k - 1];
        if (is_exactly_zero(ck)) continue;
        if (k == 1)
          throw std::runtime_error("string_rhs: exact differential with a residue");
        row.push_back({{(long)k - 1, j}, ck});
      }
    return memo.emplace(e, std::move(row)).first->second;
  };

  ChiTensor<S> out;
  out.n = omega.n;
  for (const auto& [key, c] : omega.m)
    for (const auto& [ep, mult] : key_counts(key)) {
      (void)mult;
      ChiKey rest = key_minus(key, {ep});
      for (const auto& [e, coeff] : expand(ep)) {
        ChiKey merged = key_merge(rest, {e});
        long mu = (long)std::count(merged.begin(), merged.end(), e);
        out.add(merged, c * coeff * S(mu));
      }
    }
  return out;
}

template <class S>
bool string_equation_holds(const Curve<S>& cv, const ChiTensor<S>& omega_next,
                           const ChiTensor<S>& omega, double tol = 1e-25) {
  ChiTensor<S> lhs = string_lhs(cv, omega_next);
  ChiTensor<S> rhs = string_rhs(cv, omega);
  if (lhs.n != rhs.n) return false;
  for (const auto& [key, c] : lhs.m)
    if (!values_agree(c, rhs.get(key), tol)) return false;
  for (const auto& [key, c] : rhs.m)
    if (!values_agree(lhs.get(key), c, tol)) return false;
  return true;
}

}  // namespace trec
