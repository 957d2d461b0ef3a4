#pragma once
// Spectral curve data and the per-ramification-point local frames.
//
// A curve is x(z), dy(z) rational in a global coordinate z together with the
// list of simple ramification points (zeros of x').  y itself is only ever
// needed through dy: local primitives are recovered by integrating the
// expansion of dy, so logarithmic y (e.g. y = ln z) costs nothing extra.
//
// All recursion-facing series live in the puncture coordinate v = z - c_i and
// have coefficients in the base scalar field: the deck transformation
// sigma(v) = -v + O(v^2) with x(c+sigma(v)) = x(c+v) is obtained from
// w~(v) = v*sqrt(1 + h(v)) (so that x - x(c) = x2 * w~^2) by
// sigma = w~^{-1}(-w~), which never leaves the field of the coefficients.

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trec/ratfun.hpp"
#include "trec/scalar.hpp"
#include "trec/series.hpp"

namespace trec {

template <class S>
struct Curve {
  RatF<S> x;
  RatF<S> dy;
  std::vector<S> crit;  // simple zeros of x', dy regular and nonzero there
};

// Newton-polish a ramification point (numeric backends; exact points are
// verified instead).  Returns the refined point.
template <class S>
S refine_crit(const Curve<S>& cv, S c) {
  RatF<S> xp = cv.x.derivative();
  if constexpr (scalar_traits<S>::exact) {
    if (!xp.eval(c).is_zero())
      throw std::invalid_argument("curve: claimed ramification point is not a zero of x'");
    return c;
  } else {
    RatF<S> xpp = xp.derivative();
    double resid = xp.eval(c).abs_ub();
    for (int it = 0; it < 40; ++it) {
      S num = xp.eval(c), den = xpp.eval(c);
      S next = c - num * inv_of(den);
      double r2 = xp.eval(next).abs_ub();
      if (r2 >= resid) break;
      c = next;
      resid = r2;
    }
    return c;
  }
}

template <class S>
class Frame {
 public:
  Frame(const Curve<S>& cv, size_t idx, long order)
      : idx_(idx), order_(order), crit_(cv.crit) {
    if (order < 6) order = order_ = 6;
    const long len = order + 8;  // guard digits for the interior divisions
    c_ = refine_crit(cv, cv.crit.at(idx));

    X_ = cv.x.expand_at(c_, len + 2).truncated(len);
    if constexpr (!scalar_traits<S>::exact) zero_out_linear_term();
    S x1 = X_.coeff_clipped(1);
    if (!is_exactly_zero(x1))
      throw std::invalid_argument("frame: x'(c) != 0 after refinement");
    x2_ = X_.coeff_clipped(2);
    if (is_exactly_zero(x2_))
      throw std::invalid_argument("frame: ramification point is not simple");

    // w~(v) = v sqrt(1+h): base-field square root of (x - x0)/(x2 v^2)
    Laurent<S> t0 = X_ - Laurent<S>::monomial(X_.coeff_clipped(0), 0, X_.trunc());
    Laurent<S> t = absorb_tiny_coeff(absorb_tiny_coeff(t0, 0), 1).shifted_exp(-2);
    Laurent<S> u = inv_of(x2_) * t;
    Laurent<S> h = absorb_tiny_coeff(
        u - Laurent<S>::monomial(S(1), 0, u.trunc()), 0);
    wtilde_ = sqrt_one_plus(h).shifted_exp(1);
    sigma_ = wtilde_.reversion().compose(-wtilde_).truncated(order);
    // safety: the deck map must actually preserve x on the window
    Laurent<S> back = X_.compose(sigma_) - X_.truncated(sigma_.trunc() + 1);
    if (!back.window_negligible(deck_tol()))
      throw std::runtime_error("frame: deck map failed to preserve x");
    sigma_p_ = sigma_.derivative();

    Xp_ = X_.derivative().truncated(order);
    Laurent<S> dy_loc = cv.dy.expand_at(c_, len);
    Y_ = dy_loc.truncated(order).antiderivative().truncated(order + 1);

    Laurent<S> den = S(2) * ((Y_.compose(sigma_) - Y_) * Xp_);
    if (den.known_zero() || den.val() != 2)
      throw std::runtime_error("frame: kernel denominator does not vanish to order exactly 2");
    den_inv_ = den.inverse();

    Laurent<S> vm = Laurent<S>::monomial(S(1), 1, sigma_.trunc()) - sigma_;
    diag_ = sigma_p_ * (vm * vm).inverse();

    sig_pow_.push_back(Laurent<S>::monomial(S(1), 0, sigma_.trunc()));
    sig_pow_.push_back(sigma_);
    sig_inv_pow_.push_back(sig_pow_[0]);
    sig_inv_pow_.push_back(sigma_.inverse());
  }

  size_t index() const { return idx_; }
  long order() const { return order_; }
  const S& c() const { return c_; }
  const S& x2() const { return x2_; }
  const Laurent<S>& X() const { return X_; }
  const Laurent<S>& Xp() const { return Xp_; }
  const Laurent<S>& Y() const { return Y_; }           // y(c+v) - y(c)
  const Laurent<S>& wtilde() const { return wtilde_; }  // v sqrt(1+h)
  const Laurent<S>& sigma() const { return sigma_; }
  const Laurent<S>& sigma_p() const { return sigma_p_; }
  const Laurent<S>& den_inv() const { return den_inv_; }  // 1/(2(y(sig)-y) dx)
  const Laurent<S>& diag() const { return diag_; }        // sigma'/(v-sigma)^2

  const Laurent<S>& sigma_pow(long k) {
    if (k >= 0) {
      while ((long)sig_pow_.size() <= k)
        sig_pow_.push_back((sig_pow_.back() * sigma_).truncated(sigma_.trunc()));
      return sig_pow_[k];
    }
    while ((long)sig_inv_pow_.size() <= -k)
      sig_inv_pow_.push_back(sig_inv_pow_.back() * sig_inv_pow_[1]);
    return sig_inv_pow_[-k];
  }

  // nu_ell = sigma^ell - v^ell  (the kernel numerator paired with chi_(ell,i))
  Laurent<S> nu(long ell) {
    return sigma_pow(ell) - Laurent<S>::monomial(S(1), ell, sigma_.trunc());
  }

  // chi_(m,j)(z)/dz expanded at z = c_i + v:   1/(v + c_i - c_j)^{m+1}
  const Laurent<S>& render_leg(long m, size_t j) {
    auto key = std::make_pair(m, j);
    auto it = leg_.find(key);
    if (it != leg_.end()) return it->second;
    Laurent<S> r;
    if (j == idx_) {
      r = Laurent<S>::monomial(S(1), -(m + 1));
    } else {
      r = base_inv(j).truncated(order_);
      for (long k = 0; k < m; ++k) r = (r * base_inv(j)).truncated(order_);
    }
    return leg_.emplace(key, std::move(r)).first->second;
  }

  // same leg pulled through the deck map: sigma'(v)/(sigma(v)+c_i-c_j)^{m+1}
  const Laurent<S>& render_leg_sigma(long m, size_t j) {
    auto key = std::make_pair(m, j);
    auto it = leg_sig_.find(key);
    if (it != leg_sig_.end()) return it->second;
    Laurent<S> r;
    if (j == idx_) {
      r = sigma_pow(-(m + 1)) * sigma_p_;
    } else {
      r = (base_inv_sigma(j).truncated(order_));
      for (long k = 0; k < m; ++k) r = (r * base_inv_sigma(j)).truncated(order_);
      r = r * sigma_p_;
    }
    return leg_sig_.emplace(key, std::move(r)).first->second;
  }

  // open-B legs at the running point: B(z, leg) -> m v^{m-1} on chi_(m,i)
  Laurent<S> render_b(long m) const {
    return Laurent<S>::monomial(S(m), m - 1);
  }
  const Laurent<S>& render_b_sigma(long m) {
    auto it = bsig_.find(m);
    if (it != bsig_.end()) return it->second;
    Laurent<S> r = S(m) * (sigma_pow(m - 1) * sigma_p_);
    return bsig_.emplace(m, std::move(r)).first->second;
  }

 private:
  size_t idx_;
  long order_;
  std::vector<S> crit_;
  S c_, x2_;
  Laurent<S> X_, Xp_, Y_, wtilde_, sigma_, sigma_p_, den_inv_, diag_;
  std::vector<Laurent<S>> sig_pow_, sig_inv_pow_;
  std::map<std::pair<long, size_t>, Laurent<S>> leg_, leg_sig_;
  std::map<size_t, Laurent<S>> bsig_;
  std::map<size_t, Laurent<S>> base_inv_, base_inv_sig_;

  double deck_tol() const {
    if constexpr (scalar_traits<S>::exact)
      return 0.0;
    else
      return 1e-30 * (1.0 + X_.max_abs());
  }

  // 1/(v + c_i - c_j) as a series at v=0 (regular for j != i)
  const Laurent<S>& base_inv(size_t j) {
    auto it = base_inv_.find(j);
    if (it != base_inv_.end()) return it->second;
    S d = c_ - crit_.at(j);
    Laurent<S> lin = Laurent<S>::from(0, {d, S(1)}, order_ + 2);
    return base_inv_.emplace(j, lin.inverse()).first->second;
  }
  const Laurent<S>& base_inv_sigma(size_t j) {
    auto it = base_inv_sig_.find(j);
    if (it != base_inv_sig_.end()) return it->second;
    S d = c_ - crit_.at(j);
    Laurent<S> lin = sigma_ + Laurent<S>::monomial(d, 0, sigma_.trunc());
    return base_inv_sig_.emplace(j, lin.inverse()).first->second;
  }

  // numeric backends: a coefficient that is zero by construction survives
  // ball arithmetic as a residual; zero it and fold its magnitude into the
  // neighbouring radii.  Exact backends must already have a true zero there.
  static Laurent<S> absorb_tiny_coeff(Laurent<S> f, long k) {
    if constexpr (scalar_traits<S>::exact) {
      if (!is_exactly_zero(f.coeff_clipped(k)))
        throw std::runtime_error("frame: coefficient expected to vanish is nonzero");
      return f;
    } else {
      S ck = f.coeff_clipped(k);
      double slack = ck.abs_ub();
      if (slack == 0.0) return f;
      if (slack > 1e-20 * (1.0 + f.max_abs()))
        throw std::runtime_error("frame: residual coefficient too large to absorb");
      std::vector<S> cc;
      long lo = std::min(f.val(), k);
      for (long i = lo; i < f.trunc(); ++i) {
        S v = f.coeff_clipped(i);
        if (i == k)
          v = S(0);
        else
          v.rad += slack;
        cc.push_back(v);
      }
      return Laurent<S>::from(lo, cc, f.trunc());
    }
  }

  void zero_out_linear_term() { X_ = absorb_tiny_coeff(X_, 1); }
};

}  // namespace trec
