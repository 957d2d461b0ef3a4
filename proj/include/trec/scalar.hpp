#pragma once
// Shims that let the series/curve templates run over either scalar backend:
// the exact field (Exact) or complex balls (CB).

#include <complex>

#include "trec/ball.hpp"
#include "trec/exact.hpp"

namespace trec {

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Exact> {
  static constexpr bool exact = true;
  static Exact from_q(const mpq_class& q) { return Exact(q); }
};

template <>
struct scalar_traits<CB> {
  static constexpr bool exact = false;
  static CB from_q(const mpq_class& q) { return CB(q); }
};

template <class S>
S s_from_q(const mpq_class& q) {
  return scalar_traits<S>::from_q(q);
}

inline Exact inv_of(const Exact& x) { return x.inverse(); }
inline CB inv_of(const CB& x) { return x.inv(); }

inline Exact pow_of(const Exact& x, long e) { return x.pow(e); }
inline CB pow_of(const CB& x, long e) { return x.pow(e); }

// structural zero test: exact equality, or a zero-radius zero midpoint ball
inline bool is_exactly_zero(const Exact& x) { return x.is_zero(); }
inline bool is_exactly_zero(const CB& x) { return x.rad == 0.0 && x.re.is_zero() && x.im.is_zero(); }

// check used by verifications: exact backend demands identity, balls a bound
inline bool negligible(const Exact& x, double /*tol*/) { return x.is_zero(); }
inline bool negligible(const CB& x, double tol) { return x.abs_ub() <= tol; }

inline double abs_approx(const Exact& x) { return std::abs(x.to_complex()); }
inline double abs_approx(const CB& x) { return x.abs_ub(); }

// agreement of two independently computed values: exact equality, or for
// balls a distance within the combined radii plus a relative slack
inline bool values_agree(const Exact& a, const Exact& b, double /*tol*/) { return a == b; }
inline bool values_agree(const CB& a, const CB& b, double tol) {
  CB d = a - b;
  return d.mid_abs_ub() <= d.rad + tol * (1.0 + a.abs_ub());
}

inline std::complex<double> approx(const Exact& x) { return x.to_complex(); }
inline std::complex<double> approx(const CB& x) { return x.to_complex(); }

inline std::string scalar_str(const Exact& x) { return x.str(); }
inline std::string scalar_str(const CB& x) { return x.str(); }

}  // namespace trec
