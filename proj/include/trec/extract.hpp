#pragma once
// Intersection-theoretic readout of the correlation tensors.
//
// Near a simple ramification point c_i take the standard local coordinate w
// with x = x(c_i) - w^2/2.  Each point carries two constants,
//   L_i        = dz/dw(0),   branch fixed by  arg(L_i) in (-pi/2, pi/2],
//   sqrtdel_i  = 1/(dy/dw)(0) = 1/(y'(c_i) L_i),
// and an auxiliary function obtained by integrating the bidifferential row
// at w_i = 0:   xi^i(z) = -L_i/(z - c_i).   The readout basis is built from
// the rational differentials
//   dXi^i_d = d( (d/dx)^d xi^i ),  d >= 0,
// whose pole at c_i has order exactly 2d+2 with top coefficient
// (2d+1)!! L_i^{2d+1} and whose poles at the other points have order <= 2d.
//
// A stored tensor (coefficients over chi_(ell,j) = dz/(z-c_j)^{ell+1}) is
// rewritten in this basis one slot at a time.  Matching principal parts at
// every ramification point suffices: both sides are rational differentials
// vanishing at infinity, so a zero remainder pins them globally.  The change
// of basis is triangular in the pole order; any remainder that cannot be
// consumed means the tensor does not lie in the span, and that is reported
// loudly rather than dropped.  The resulting coefficients are the correlators
// <prod_j psi_j^{d_j} e_{i_j}>_g of a cohomological field theory in its
// normalized canonical basis, whose topological part weighs a genus-g vertex
// with k legs on e_i by (sqrtdel_i)^{2g-2+k}.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trec/chi_tensor.hpp"
#include "trec/curve.hpp"

namespace trec {

// sign of p + q*sqrt(r) for rational p, q and a nonnegative integer radicand
inline int sign_with_radical(const mpq_class& p, const mpq_class& q, const mpz_class& r) {
  if (sgn(q) == 0 || r == 0) return sgn(p);
  if (sgn(p) == 0) return sgn(q);
  if (sgn(p) == sgn(q)) return sgn(p);
  mpq_class a = p * p, b = q * q * mpq_class(r);
  int c = cmp(a, b);
  if (c == 0) return 0;
  return c > 0 ? sgn(p) : sgn(q);
}

// branch selector: true iff arg(v) lies in (-pi/2, pi/2]
inline bool principal_branch(const Exact& v) {
  int re = sign_with_radical(v.base().re, v.ext_coeff().re, v.radicand());
  if (re != 0) return re > 0;
  return sign_with_radical(v.base().im, v.ext_coeff().im, v.radicand()) > 0;
}
inline bool principal_branch(const CB& v) {
  double slack = 1e3 * v.rad + 1e-200;
  if (std::fabs(v.re.get_d()) > slack) return v.re.sgn() > 0;
  if (std::fabs(v.im.get_d()) > slack) return v.im.sgn() > 0;
  throw std::runtime_error("principal_branch: value too close to zero to take sides");
}

inline Exact sqrt_scalar(const Exact& x) { return sqrt_or_adjoin(x); }
inline CB sqrt_scalar(const CB& x) { return csqrt(x); }

template <class S>
struct PointData {
  S c;        // ramification point
  S L;        // dz/dw at w = 0
  S y1;       // y'(c)
  S sqrtdel;  // 1/(y'(c) L); its square is the vertex weight unit
};

template <class S>
class Extractor {
 public:
  explicit Extractor(Curve<S> cv, double tol = 1e-20) : cv_(std::move(cv)), tol_(tol) {
    if (cv_.crit.empty()) throw std::invalid_argument("extract: curve has no ramification points");
    for (auto& c : cv_.crit) c = refine_crit(cv_, c);
    ensure_depth(2);
    for (size_t i = 0; i < cv_.crit.size(); ++i) {
      PointData<S> pd;
      pd.c = frames_[i].c();
      S kappa = sqrt_scalar(S(-2) * frames_[i].x2());
      pd.L = inv_of(kappa);
      if (!principal_branch(pd.L)) pd.L = -pd.L;
      pd.y1 = cv_.dy.eval(pd.c);
      pd.sqrtdel = inv_of(pd.y1 * pd.L);
      pts_.push_back(pd);
    }
  }

  size_t points() const { return pts_.size(); }
  const PointData<S>& point(size_t i) const { return pts_.at(i); }
  const Curve<S>& curve() const { return cv_; }

  // z(w) - c_i for the standard local coordinate w (x = x(c_i) - w^2/2),
  // as a series in w on the window [1, len)
  Laurent<S> local_inverse(size_t i, long len) {
    ensure_depth((len + 3) / 2);
    Laurent<S> wt = frames_.at(i).wtilde().truncated(len + 1);
    return wt.reversion().compose(Laurent<S>::monomial(pts_.at(i).L, 1, len + 1));
  }

  // y(z(w)) - y(c_i) as a series in w
  Laurent<S> y_of_w(size_t i, long len) {
    Laurent<S> vz = local_inverse(i, len);
    return frames_.at(i).Y().truncated(len + 1).compose(vz);
  }

  // principal parts of dXi^i_d/dz over the chi labels (all points at once)
  const std::map<ChiVar, S>& column(long d, size_t i) {
    if (d < 0) throw std::invalid_argument("extract: psi power must be nonnegative");
    auto key = std::make_pair(d, i);
    auto it = col_.find(key);
    if (it != col_.end()) return it->second;
    ensure_depth(d);
    std::map<ChiVar, S> col;
    for (size_t j = 0; j < frames_.size(); ++j) {
      Laurent<S> s = dxi_series(d, i, j);
      const long cap = (j == i) ? 2 * d + 1 : std::max(2 * d - 1, 0l);
      if (!s.known_zero())
        for (long k = s.val(); k < -(cap + 1); ++k)
          if (!negligible(s.coeff_clipped(k), tol_ * (1.0 + s.max_abs())))
            throw std::logic_error("extract: dXi pole order exceeds its bound at point " +
                                   std::to_string(j));
      for (long ell = 1; ell <= cap; ++ell) {
        S v = s.coeff_clipped(-(ell + 1));
        if (!is_exactly_zero(v)) col[{ell, j}] = v;
      }
    }
    // the top coefficient has a closed form; treat a mismatch as fatal
    S top = s_from_q<S>(mpq_class(double_factorial_z(2 * d + 1))) * pow_of(pts_[i].L, 2 * d + 1);
    auto tt = col.find({2 * d + 1, i});
    if (tt == col.end() || !values_agree(tt->second, top, 1e-25))
      throw std::logic_error("extract: dXi top coefficient disagrees with its closed form");
    return col_.emplace(key, std::move(col)).first->second;
  }

  // express one slot function, given over chi labels, in the dXi columns.
  // Returns coefficients over (d, i); the input must be consumed exactly.
  std::map<ChiVar, S> solve_slot(std::map<ChiVar, S> vec) {
    std::map<ChiVar, S> out;
    double scale = 1.0;
    for (const auto& [b, v] : vec) scale = std::max(scale, abs_approx(v));
    while (true) {
      for (auto it = vec.begin(); it != vec.end();) {
        if (negligible(it->second, tol_ * scale))
          it = vec.erase(it);
        else
          ++it;
      }
      if (vec.empty()) break;
      long ell = 0;
      for (const auto& [b, v] : vec) ell = std::max(ell, b.first);
      if (ell % 2 == 0)
        throw std::runtime_error(
            "extract: slot function is not in the span of the dXi basis "
            "(stuck at pole order " + std::to_string(ell + 1) + ")");
      const long d = (ell - 1) / 2;
      // peel every point at this level; columns do not couple same-level rows
      std::vector<std::pair<size_t, S>> layer;
      for (size_t j = 0; j < pts_.size(); ++j) {
        auto it = vec.find({ell, j});
        if (it == vec.end()) continue;
        layer.emplace_back(j, it->second * inv_of(column(d, j).at({ell, j})));
      }
      for (const auto& [j, a] : layer) {
        for (const auto& [row, g] : column(d, j)) {
          auto it = vec.find(row);
          if (it == vec.end())
            vec.emplace(row, -(a * g));
          else
            it->second -= a * g;
        }
        out[{d, j}] = a;
      }
    }
    return out;
  }

  // rewrite a stored tensor over chi into psi-class coefficients; key entries
  // of the result are (d, i) = (psi power, point index).  Keys keep the same
  // one-entry-per-distinct-arrangement convention as the input.
  ChiTensor<S> to_psi_basis(const ChiTensor<S>& T) {
    if (T.n <= 0) throw std::invalid_argument("extract: tensor has no slots");
    ensure_depth(std::max((T.max_ell() - 1) / 2, 0l));
    // ordered expansion: every distinct arrangement of each stored key
    std::map<ChiKey, S> cur;
    for (const auto& [key, c] : T.m) {
      ChiKey k = key;
      do cur[k] = c;
      while (std::next_permutation(k.begin(), k.end()));
    }
    const long n = T.n;
    for (long s = 0; s < n; ++s) {
      // group tuples by the labels away from slot s, convert each group
      std::map<ChiKey, std::map<ChiVar, S>> groups;
      for (const auto& [tup, c] : cur) {
        ChiKey ctx = tup;
        ChiVar b = ctx[s];
        ctx.erase(ctx.begin() + s);
        auto& cell = groups[ctx][b];
        cell += c;
      }
      std::map<ChiKey, S> next;
      for (auto& [ctx, vec] : groups) {
        for (const auto& [pb, a] : solve_slot(std::move(vec))) {
          if (is_exactly_zero(a)) continue;
          ChiKey tup = ctx;
          tup.insert(tup.begin() + s, pb);
          auto it = next.find(tup);
          if (it == next.end())
            next.emplace(std::move(tup), a);
          else
            it->second += a;
        }
      }
      cur = std::move(next);
    }
    // re-collect ordered tuples; agreement across arrangements is a free
    // end-to-end consistency check on the whole conversion
    ChiTensor<S> out;
    out.n = n;
    for (const auto& [tup, c] : cur) {
      ChiKey k = key_sorted(tup);
      auto it = out.m.find(k);
      if (it == out.m.end())
        out.m.emplace(std::move(k), c);
      else if (!values_agree(it->second, c, tol_))
        throw std::runtime_error("extract: arrangement symmetry broken at key " + key_str(k));
    }
    for (auto it = out.m.begin(); it != out.m.end();) {
      if (negligible(it->second, tol_))
        it = out.m.erase(it);
      else
        ++it;
    }
    return out;
  }

 private:
  Curve<S> cv_;
  double tol_;
  long dcap_ = -1;
  std::vector<Frame<S>> frames_;
  std::vector<Laurent<S>> xp_inv_;
  std::vector<PointData<S>> pts_;
  std::map<std::pair<long, size_t>, std::map<ChiVar, S>> col_;

  void ensure_depth(long dmax) {
    if (dmax <= dcap_) return;
    dcap_ = std::max(dmax, 2l);
    frames_.clear();
    xp_inv_.clear();
    for (size_t i = 0; i < cv_.crit.size(); ++i)
      frames_.emplace_back(cv_, i, 2 * dcap_ + 10);
    for (auto& fr : frames_) xp_inv_.push_back(fr.Xp().inverse());
  }

  // expansion of dXi^i_d/dz at the point j, in v = z - c_j
  Laurent<S> dxi_series(long d, size_t i, size_t j) {
    Laurent<S> phi = (-pts_[i].L) * frames_[j].render_leg(0, i);
    for (long k = 0; k < d; ++k) phi = phi.derivative() * xp_inv_[j];
    return phi.derivative();
  }
};

}  // namespace trec
