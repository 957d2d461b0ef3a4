#pragma once
// The residue recursion on a global curve.
//
// omega_{g,n+1}(z0, u_1..u_n) =
//   sum_i Res_{z->c_i} [int_z^{sigma(z)} B(., z0)] / (2 (w(sigma z) - w(z)))
//     * ( omega_{g-1,n+2}(z, sigma z, u)
//         + sum' omega_{g1}(z, u_I) omega_{g2}(sigma z, u_J) ),
// with w = y dx, the primed sum running over ordered splits g1+g2 = g and
// (I, J) partitioning the legs, excluding all omega_{0,1} factors;
// omega_{0,2} = B enters only as a one-leg factor.
//
// Everything is evaluated in the puncture coordinate v = z - c_i:
//  - the kernel numerator paired against chi_(ell,i)(z0) is
//    nu_ell(v) = sigma(v)^ell - v^ell,
//  - the kernel denominator is DEN = 2 (Y(sigma v) - Y(v)) X'(v),
//  - a stored factor's slot at z renders as 1/(v + c_i - c_j)^{m+1}, at
//    sigma z the same with sigma(v) substituted, times the sigma' Jacobian,
//  - an open B leg at z renders as m v^{m-1} (at sigma z: m sigma^{m-1}
//    sigma'), and B(z, sigma z) itself as sigma'/(v - sigma)^2.
//
// The coefficient of an output key is computed independently once for every
// distinct label the key offers as the z0 slot, and the engine insists the
// computations agree; that is an end-to-end symmetry check we get for free.

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trec/chi_tensor.hpp"
#include "trec/curve.hpp"
#include "trec/scalar.hpp"
#include "trec/series.hpp"

namespace trec {

template <class S>
class Engine {
 public:
  // gmax/nmax: the largest correlator this engine will be asked for.  They
  // fix the series order of the local frames once and for all: the deepest
  // kernel bucket multiplies two legs of pole order up to
  // L = 6 gmax + 2 nmax - 9, and its lowest residue needs the product known
  // through v^0, which costs 2L + 4 coefficients plus guard digits.
  Engine(Curve<S> cv, long gmax, long nmax)
      : cv_(std::move(cv)), lbudget_(6 * gmax - 5 + 2 * nmax) {
    if (gmax < 0 || nmax < 1 || 2 * gmax - 2 + nmax <= 0)
      throw std::invalid_argument("engine: unstable (gmax, nmax)");
    order_ = 2 * lbudget_ + 4;
    // polish every ramification point up front: frames render legs anchored
    // at the *other* points too, so all of them must be at full precision
    for (auto& c : cv_.crit) c = refine_crit(cv_, c);
    for (size_t i = 0; i < cv_.crit.size(); ++i) frames_.emplace_back(cv_, i, order_);
  }

  const Curve<S>& curve() const { return cv_; }
  size_t points() const { return frames_.size(); }
  Frame<S>& frame(size_t i) { return frames_.at(i); }
  long order() const { return order_; }

  const ChiTensor<S>& omega(long g, long n) {
    if (g < 0 || n < 1 || 2 * g - 2 + n <= 0)
      throw std::invalid_argument("omega: unstable (g,n)");
    if (g == 0 && n == 2)
      throw std::invalid_argument("omega: (0,2) is the bidifferential, not a stored tensor");
    if (6 * g - 5 + 2 * n > lbudget_)
      throw std::invalid_argument("omega: beyond the declared (gmax, nmax) budget");
    auto key = std::make_pair(g, n);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    ChiTensor<S> t = step(g, n);
    return cache_.emplace(key, std::move(t)).first->second;
  }

 private:
  Curve<S> cv_;
  long lbudget_, order_;
  std::vector<Frame<S>> frames_;
  std::map<std::pair<long, long>, ChiTensor<S>> cache_;

  static bool stored_ok(long g, long n) { return 2 * g - 2 + n > 0; }

  ChiTensor<S> step(long g, long nout) {
    const long legs = nout - 1;
    // per output key: the coefficient as computed from each choice of z0 slot
    std::map<ChiKey, std::map<ChiVar, S>> parts;

    for (size_t i = 0; i < frames_.size(); ++i) {
      Frame<S>& fr = frames_[i];
      std::map<ChiKey, Laurent<S>> W;  // leg bucket -> accumulated v-series
      std::map<std::pair<ChiVar, ChiVar>, Laurent<S>> pcache;

      auto prod_aa = [&](ChiVar b1, ChiVar b2) -> const Laurent<S>& {
        auto k = std::make_pair(b1, b2);
        auto it = pcache.find(k);
        if (it == pcache.end())
          it = pcache
                   .emplace(k, fr.render_leg(b1.first, b1.second) *
                                   fr.render_leg_sigma(b2.first, b2.second))
                   .first;
        return it->second;
      };
      auto add_bucket = [&](const ChiKey& lam, const S& wgt, const Laurent<S>& ser) {
        if (is_exactly_zero(wgt)) return;
        auto it = W.find(lam);
        if (it == W.end())
          W.emplace(lam, wgt * ser);
        else
          it->second += wgt * ser;
      };

      // ---- the omega_{g-1, legs+2}(z, sigma z, u) term
      if (g >= 1) {
        if (g == 1 && legs == 0) {
          add_bucket(ChiKey{}, S(1), fr.diag());  // B(z, sigma z)
        } else {
          const ChiTensor<S>& T = omega(g - 1, legs + 2);
          for (const auto& [K, cK] : T.m) {
            auto counts = key_counts(K);
            // the two kernel slots take an ordered pair of the key's values;
            // one symmetrized tensor entry yields each such pair exactly once
            for (const auto& p : counts)
              for (const auto& q : counts) {
                if (p.first == q.first && p.second < 2) continue;
                ChiKey lam = key_minus(K, ChiKey{p.first, q.first});
                add_bucket(lam, cK, prod_aa(p.first, q.first));
              }
          }
        }
      }

      // ---- ordered splits omega_{g1}(z, u_I) omega_{g2}(sigma z, u_J);
      // a product of two symmetrized tensors lands on the merged key with the
      // multiplicity of sub-multiset choices, prod_v C(mult(v), mult_I(v))
      for (long g1 = 0; g1 <= g; ++g1) {
        const long g2 = g - g1;
        for (long n1 = 0; n1 <= legs; ++n1) {
          const long n2 = legs - n1;
          const bool st1 = stored_ok(g1, n1 + 1);
          const bool st2 = stored_ok(g2, n2 + 1);
          const bool bleg1 = (g1 == 0 && n1 == 1);
          const bool bleg2 = (g2 == 0 && n2 == 1);

          if (st1 && st2) {
            const ChiTensor<S>& T1 = omega(g1, n1 + 1);
            const ChiTensor<S>& T2 = omega(g2, n2 + 1);
            for (const auto& [K1, c1] : T1.m)
              for (const auto& p : key_counts(K1)) {
                ChiKey lam1 = key_minus(K1, ChiKey{p.first});
                for (const auto& [K2, c2] : T2.m)
                  for (const auto& q : key_counts(K2)) {
                    ChiKey lam = key_merge(lam1, key_minus(K2, ChiKey{q.first}));
                    S wgt = s_from_q<S>(mpq_class(overlap_multinomial(lam, lam1))) * c1 * c2;
                    add_bucket(lam, wgt, prod_aa(p.first, q.first));
                  }
              }
          }

          if (st1 && bleg2) {  // stored factor at z, open B leg at sigma z
            const ChiTensor<S>& T1 = omega(g1, n1 + 1);
            for (const auto& [K1, c1] : T1.m)
              for (const auto& p : key_counts(K1)) {
                ChiKey lam1 = key_minus(K1, ChiKey{p.first});
                const Laurent<S>& A1 = fr.render_leg(p.first.first, p.first.second);
                const long mcap = 1 - A1.val();  // higher m cannot reach the residue
                for (long m = 1; m <= mcap; ++m) {
                  ChiVar bm{m, i};
                  ChiKey lam = key_merge(lam1, ChiKey{bm});
                  S wgt = s_from_q<S>(mpq_class(overlap_multinomial(lam, ChiKey{bm}))) * c1;
                  add_bucket(lam, wgt, A1 * fr.render_b_sigma(m));
                }
              }
          }

          if (bleg1 && st2) {  // open B leg at z, stored factor at sigma z
            const ChiTensor<S>& T2 = omega(g2, n2 + 1);
            for (const auto& [K2, c2] : T2.m)
              for (const auto& q : key_counts(K2)) {
                ChiKey lam2 = key_minus(K2, ChiKey{q.first});
                const Laurent<S>& A2 = fr.render_leg_sigma(q.first.first, q.first.second);
                const long mcap = 1 - A2.val();
                for (long m = 1; m <= mcap; ++m) {
                  ChiVar bm{m, i};
                  ChiKey lam = key_merge(lam2, ChiKey{bm});
                  S wgt = s_from_q<S>(mpq_class(overlap_multinomial(lam, ChiKey{bm}))) * c2;
                  add_bucket(lam, wgt, fr.render_b(m) * A2);
                }
              }
          }

          if (bleg1 && bleg2) {
            // two open B legs; the residue kills everything above m1 = m2 = 1,
            // and the key {(1,i),(1,i)} absorbs both leg assignments
            ChiVar bm{1, i};
            add_bucket(ChiKey{bm, bm}, S(2), fr.render_b(1) * fr.render_b_sigma(1));
          }
        }
      }

      // ---- residues: coefficient on chi_(ell,i)(z0) for each bucket
      const long lmax = 6 * g - 5 + 2 * nout;  // admissible pole order bound
      for (const auto& [lam, Wser] : W) {
        if (Wser.known_zero()) continue;
        Laurent<S> F = Wser * fr.den_inv();
        if (F.known_zero()) continue;
        const long lcap = -F.val() - 1;
        for (long ell = 1; ell <= lcap; ++ell) {
          S r = (fr.nu(ell) * F).residue();
          if (ell <= lmax) {
            if (is_exactly_zero(r)) continue;
            ChiVar b{ell, i};
            parts[key_merge(lam, ChiKey{b})][b] += r;
          } else if (!negligible(r, 1e-18)) {
            throw std::logic_error(
                "recursion: pole order exceeds the admissible bound at bucket " +
                key_str(lam));
          }
        }
      }
    }

    // merge the per-slot computations, demanding agreement; a slot that was
    // never written is a computed zero and must agree too
    ChiTensor<S> out;
    out.n = nout;
    for (auto& [key, byslot] : parts) {
      const S& ref = byslot.begin()->second;
      for (const auto& p : key_counts(key)) {
        auto it = byslot.find(p.first);
        S v = (it == byslot.end()) ? S(0) : it->second;
        if (!values_agree(ref, v, 1e-25))
          throw std::runtime_error("recursion: slot symmetry check failed at key " +
                                   key_str(key) + ": " + scalar_str(ref) + " vs " +
                                   scalar_str(v));
      }
      if (negligible(ref, 1e-30)) continue;  // exact zero, or radius-level noise
      out.m.emplace(key, ref);
    }
    return out;
  }
};

}  // namespace trec
