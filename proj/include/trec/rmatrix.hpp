#pragma once
// The matrix series attached to the bidifferential near the ramification
// points.
//
// In the standard local coordinates w_i (x = x(c_i) - w_i^2/2) write
//   B(w_i, w_j)/(dw_i dw_j) = delta_ij/(w_i - w_j)^2 + sum a^(i,j)_{k,m} w_i^k w_j^m.
// The regular parts are log-derivatives: with E = z_i(w) - z_j(w') off the
// diagonal and E = (z_i(w) - z_i(w'))/(w - w') on it, the table is
//   a^(i,j) = d_w d_w' log E,
// computed here through one bivariate polynomial division per pair.
//
// Gaussian averaging of the row at w_i = 0 against e^{-w_j^2/(2 s)} turns the
// regular part into a matrix power series in s,
//   Rinv(s)^j_i = delta_ij - sum_{m>=0} (2m-1)!! a^(i,j)_{0,2m} s^{m+1},
// with Rinv(0) = I; R(s) is its order-by-order inverse.  Three identities tie
// the series back to the curve and are exposed as checks:
//  - symplectic unitarity,      Rinv(s) = R(-s)^T,
//  - the dilaton constraint,    sum_k Rinv(s)^i_k / sqrtdel_k
//                                 = sum_m (2m+1)!! [w^{2m+1}](y o z_i) s^m,
//  - the product decomposition, sum_k Rinv(s1)^i_k Rinv(s2)^j_k
//      = delta_ij - (s1+s2) sum (2p-1)!!(2q-1)!! a^(i,j)_{2p,2q} s1^p s2^q,
// the last normalized so that s2 = 0 reproduces the definition of Rinv and
// s2 = -s1 reproduces unitarity.

#include <stdexcept>
#include <string>
#include <vector>

#include "trec/extract.hpp"

namespace trec {

// dense bivariate polynomial window: coefficients c[k][m], 0 <= k,m < n
template <class S>
struct Biv {
  long n = 0;
  std::vector<std::vector<S>> c;
  Biv() = default;
  explicit Biv(long n_) : n(n_), c(n_, std::vector<S>(n_, S(0))) {}

  Biv d1() const {  // partial derivative in the first variable
    Biv r(n);
    for (long k = 0; k + 1 < n; ++k)
      for (long m = 0; m < n; ++m) r.c[k][m] = S(k + 1) * c[k + 1][m];
    return r;
  }
  Biv d2() const {
    Biv r(n);
    for (long k = 0; k < n; ++k)
      for (long m = 0; m + 1 < n; ++m) r.c[k][m] = S(m + 1) * c[k][m + 1];
    return r;
  }
};

// q with q*den = num on the shared window; den(0,0) must be invertible
template <class S>
Biv<S> biv_divide(const Biv<S>& num, const Biv<S>& den) {
  const long n = num.n;
  if (den.n != n) throw std::invalid_argument("biv_divide: window mismatch");
  Biv<S> q(n);
  S i0 = inv_of(den.c[0][0]);
  for (long k = 0; k < n; ++k)
    for (long m = 0; m < n; ++m) {
      S acc = num.c[k][m];
      for (long dk = 0; dk <= k; ++dk)
        for (long dm = 0; dm <= m; ++dm) {
          if (dk == 0 && dm == 0) continue;
          if (is_exactly_zero(den.c[dk][dm])) continue;
          acc -= den.c[dk][dm] * q.c[k - dk][m - dm];
        }
      q.c[k][m] = i0 * acc;
    }
  return q;
}

template <class S>
class RMatrix {
 public:
  using Mat = std::vector<std::vector<S>>;

  RMatrix(Extractor<S>& ex, long order, double tol = 1e-25)
      : ex_(ex), ord_(order), np_(ex.points()), tol_(tol) {
    if (order < 1) throw std::invalid_argument("rmatrix: order must be positive");
    n_ = 2 * order + 2;

    // one local-coordinate series per point, deep enough for the full
    // divided-difference square
    std::vector<Laurent<S>> vz;
    vz.reserve(np_);
    for (size_t i = 0; i < np_; ++i) vz.push_back(ex.local_inverse(i, 2 * n_ - 1));

    areg_.assign(np_, std::vector<Biv<S>>(np_));
    for (size_t i = 0; i < np_; ++i)
      for (size_t j = 0; j < np_; ++j) areg_[i][j] = make_areg(i, j, vz);
    // the table must be symmetric under swapping the two variables; each pair
    // is computed independently, so this is a real cross-check.  The last row
    // and column of the window are skipped: the derivative stencils cannot
    // see past the window edge, so those entries are not trustworthy.
    for (size_t i = 0; i < np_; ++i)
      for (size_t j = i; j < np_; ++j)
        for (long k = 0; k + 1 < n_; ++k)
          for (long m = 0; m + 1 < n_; ++m)
            if (!values_agree(areg_[i][j].c[k][m], areg_[j][i].c[m][k], tol_))
              throw std::logic_error("rmatrix: regular part is not symmetric at pair (" +
                                     std::to_string(i) + "," + std::to_string(j) + ")");

    minv_.assign(ord_ + 1, ident());
    for (long m = 1; m <= ord_; ++m) {
      minv_[m] = zero_mat();
      S f = s_from_q<S>(mpq_class(double_factorial_z(2 * m - 3)));
      for (size_t r = 0; r < np_; ++r)
        for (size_t cl = 0; cl < np_; ++cl)
          minv_[m][r][cl] = -(f * areg_[cl][r].c[0][2 * m - 2]);
    }
    // invert order by order: R Rinv = I with both constant terms I
    r_.assign(ord_ + 1, ident());
    for (long m = 1; m <= ord_; ++m) {
      r_[m] = zero_mat();
      for (long k = 1; k <= m; ++k)
        for (size_t a = 0; a < np_; ++a)
          for (size_t b = 0; b < np_; ++b) {
            S acc(0);
            for (size_t t = 0; t < np_; ++t) acc += r_[m - k][a][t] * minv_[k][t][b];
            r_[m][a][b] -= acc;
          }
    }
  }

  long order() const { return ord_; }
  size_t points() const { return np_; }

  // coefficient of s^m in Rinv, row/column as in  Rinv e_col = sum_row ... e_row
  const S& rinv(long m, size_t row, size_t col) const { return minv_.at(m)[row][col]; }
  const S& rmat(long m, size_t row, size_t col) const { return r_.at(m)[row][col]; }
  // regular-part table entry a^(i,j)_{k,m}
  const S& a_coeff(size_t i, size_t j, long k, long m) const { return areg_.at(i).at(j).c.at(k).at(m); }

  bool check_unitarity(double tol) const {
    for (long m = 0; m <= ord_; ++m)
      for (size_t i = 0; i < np_; ++i)
        for (size_t j = 0; j < np_; ++j) {
          S rhs = r_[m][j][i];
          if (m % 2) rhs = -rhs;
          if (!values_agree(minv_[m][i][j], rhs, tol)) return false;
        }
    return true;
  }

  bool check_dilaton(double tol) {
    for (size_t i = 0; i < np_; ++i) {
      Laurent<S> yw = ex_.y_of_w(i, 2 * ord_ + 2);
      for (long m = 0; m <= ord_; ++m) {
        S lhs(0);
        for (size_t k = 0; k < np_; ++k)
          lhs += minv_[m][i][k] * inv_of(ex_.point(k).sqrtdel);
        S rhs = s_from_q<S>(mpq_class(double_factorial_z(2 * m + 1))) * yw.coeff_clipped(2 * m + 1);
        if (!values_agree(lhs, rhs, tol)) return false;
      }
    }
    return true;
  }

  bool check_product_decomposition(double tol) const {
    for (size_t i = 0; i < np_; ++i)
      for (size_t j = 0; j < np_; ++j)
        for (long p = 0; p <= ord_; ++p)
          for (long q = 0; q <= ord_; ++q) {
            S lhs(0);
            for (size_t t = 0; t < np_; ++t) lhs += minv_[p][i][t] * minv_[q][j][t];
            S rhs = (p == 0 && q == 0 && i == j) ? S(1) : S(0);
            if (p >= 1) rhs -= phi(i, j, p - 1, q);
            if (q >= 1) rhs -= phi(i, j, p, q - 1);
            if (!values_agree(lhs, rhs, tol)) return false;
          }
    return true;
  }

 private:
  Extractor<S>& ex_;
  long ord_, n_;
  size_t np_;
  double tol_;
  std::vector<std::vector<Biv<S>>> areg_;
  std::vector<Mat> minv_, r_;

  Mat ident() const {
    Mat e(np_, std::vector<S>(np_, S(0)));
    for (size_t i = 0; i < np_; ++i) e[i][i] = S(1);
    return e;
  }
  Mat zero_mat() const { return Mat(np_, std::vector<S>(np_, S(0))); }

  S phi(size_t i, size_t j, long p, long q) const {
    S f = s_from_q<S>(mpq_class(double_factorial_z(2 * p - 1) * double_factorial_z(2 * q - 1)));
    return f * areg_[i][j].c[2 * p][2 * q];
  }

  Biv<S> make_areg(size_t i, size_t j, const std::vector<Laurent<S>>& vz) {
    Biv<S> E(n_);
    if (i == j) {
      // divided difference (z(w) - z(w'))/(w - w'): entry (p,q) is z_{p+q+1}
      for (long p = 0; p < n_; ++p)
        for (long q = 0; q < n_; ++q)
          E.c[p][q] = vz[i].coeff_clipped(p + q + 1);
    } else {
      E.c[0][0] = ex_.point(i).c - ex_.point(j).c;
      for (long k = 1; k < n_; ++k) {
        E.c[k][0] += vz[i].coeff_clipped(k);
        E.c[0][k] -= vz[j].coeff_clipped(k);
      }
    }
    return biv_divide(E.d2(), E).d1();
  }
};

}  // namespace trec
