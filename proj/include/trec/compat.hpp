#pragma once
// Whether a 1-form dy fits the branch structure of x.
//
// Set Lambda = dy/dx (a rational function) and form
//   eta = d(Lambda) + sum_i Res_{w=c_i} B(., w) Lambda(w),
// with B the Cauchy kernel dz dw/(z-w)^2.  The residue sum replaces the
// principal part of d(Lambda) at every ramification point, so eta is regular
// there; compatibility asks for more: eta must be invariant under each local
// deck involution.  The check expands eta at every c_i and requires the odd
// part  eta - sigma^* eta  to vanish through the requested order.
//
// For x = z + 1/z this passes for dy = dz and dz/z (eta vanishes
// identically) and fails for dy = 2z dz (eta = 2 dz, which no involution
// fixes).  Exact scalars expected: Lambda is expanded at its own poles.

#include <vector>

#include "trec/curve.hpp"
#include "trec/ratfun.hpp"

namespace trec {

template <class S>
bool compatibility_holds(const Curve<S>& cv, long order = 12, double tol = 1e-25) {
  Curve<S> c2 = cv;
  for (auto& c : c2.crit) c = refine_crit(cv, c);
  size_t np = c2.crit.size();

  RatF<S> lam = cv.dy / cv.x.derivative();
  long len = order + 6;
  std::vector<Laurent<S>> lexp;
  lexp.reserve(np);
  for (const S& c : c2.crit) lexp.push_back(lam.expand_at(c, len));

  std::vector<Frame<S>> fr;
  fr.reserve(np);
  for (size_t j = 0; j < np; ++j) fr.emplace_back(c2, j, len);

  for (size_t j = 0; j < np; ++j) {
    Laurent<S> eta = lexp[j].derivative();
    for (size_t i = 0; i < np; ++i) {
      // principal part of Lambda at c_i feeds the kernel residue:
      // Res_{w=c_i} Lambda(w)/(z-w)^2 = sum_m a_{-1-m} (m+1) (z-c_i)^{-m-2}
      const Laurent<S>& li = lexp[i];
      if (li.known_zero()) continue;
      for (long m = 0; -(m + 1) >= li.val(); ++m) {
        S a = li.coeff_clipped(-(m + 1));
        if (is_exactly_zero(a)) continue;
        eta = eta + (a * S(m + 1)) * fr[j].render_leg(m + 1, i);
      }
    }
    if (eta.known_zero()) continue;
    if (eta.val() < 0) return false;  // a surviving pole certainly is not even
    Laurent<S> pulled = eta.compose(fr[j].sigma()) * fr[j].sigma_p();
    Laurent<S> odd = eta - pulled;
    long cap = std::min(order, odd.trunc() - 1);
    for (long k = 0; k <= cap; ++k)
      if (!negligible(odd.coeff_clipped(k), tol)) return false;
  }
  return true;
}

}  // namespace trec
