#pragma once
// Symmetric tensors over the chi basis.
//
// chi_(ell,i) = dz/(z - c_i)^{ell+1}, ell >= 1.  A correlation form
// omega_{g,n}(z_1..z_n) is stored as a map from the sorted multiset
// {b_1,...,b_n} of chi labels to the coefficient C[b_1..b_n]; the full form
// is sum_key C[key] * (sum over distinct orderings of the key) prod chi(z_s),
// so one map entry stands for all slot arrangements at once.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trec/exact.hpp"
#include "trec/scalar.hpp"

namespace trec {

using ChiVar = std::pair<long, size_t>;  // (ell, ramification point index)
using ChiKey = std::vector<ChiVar>;      // kept sorted ascending

inline ChiKey key_sorted(ChiKey k) {
  std::sort(k.begin(), k.end());
  return k;
}

// distinct values with multiplicities, in key order
inline std::vector<std::pair<ChiVar, long>> key_counts(const ChiKey& k) {
  std::vector<std::pair<ChiVar, long>> out;
  for (const auto& b : k) {
    if (!out.empty() && out.back().first == b)
      ++out.back().second;
    else
      out.emplace_back(b, 1);
  }
  return out;
}

// remove one copy of each entry of part (must be present)
inline ChiKey key_minus(const ChiKey& whole, const ChiKey& part) {
  ChiKey out = whole;
  for (const auto& b : part) {
    auto it = std::find(out.begin(), out.end(), b);
    if (it == out.end()) throw std::logic_error("key_minus: entry not present");
    out.erase(it);
  }
  return out;
}

inline ChiKey key_merge(const ChiKey& a, const ChiKey& b) {
  ChiKey out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// number of ways to pick the sub-multiset `part` out of `whole`:
// prod_v C(mult_whole(v), mult_part(v)).  This is the weight with which a
// product of two symmetrized factors lands on the merged symmetrized key.
inline mpz_class overlap_multinomial(const ChiKey& whole, const ChiKey& part) {
  mpz_class r = 1;
  auto cw = key_counts(whole);
  auto cp = key_counts(part);
  size_t iw = 0;
  for (const auto& [b, mp] : cp) {
    while (iw < cw.size() && cw[iw].first < b) ++iw;
    if (iw == cw.size() || !(cw[iw].first == b))
      throw std::logic_error("overlap_multinomial: part not inside whole");
    r *= binomial_z((unsigned long)cw[iw].second, (unsigned long)mp);
  }
  return r;
}

template <class S>
struct ChiTensor {
  long n = 0;  // slot count
  std::map<ChiKey, S> m;

  S get(const ChiKey& key) const {
    auto it = m.find(key);
    return it == m.end() ? S(0) : it->second;
  }
  void add(const ChiKey& key, const S& v) {
    if ((long)key.size() != n) throw std::invalid_argument("ChiTensor::add: slot mismatch");
    auto it = m.find(key);
    if (it == m.end())
      m.emplace(key, v);
    else
      it->second += v;
  }
  long max_ell() const {
    long r = 0;
    for (const auto& [k, v] : m)
      for (const auto& b : k) r = std::max(r, b.first);
    return r;
  }
};

inline std::string key_str(const ChiKey& k) {
  std::string s = "{";
  for (size_t i = 0; i < k.size(); ++i) {
    s += "(" + std::to_string(k[i].first) + "," + std::to_string(k[i].second) + ")";
    if (i + 1 < k.size()) s += ",";
  }
  return s + "}";
}

}  // namespace trec
