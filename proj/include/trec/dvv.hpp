#pragma once
// Exact psi-class intersection numbers <tau_{d_1} ... tau_{d_n}>_g, computed
// by the double-factorial (KdV/Virasoro) recursion on the largest index:
//
//   (2d_1+1)!! <tau_{d_1} prod_j tau_{d_j}>_g
//     = sum_j [(2(d_1+d_j)-1)!!/(2d_j-1)!!] <tau_{d_1+d_j-1} prod_{i!=j}>_g
//     + 1/2 sum_{a+b=d_1-2} (2a+1)!!(2b+1)!! (
//           <tau_a tau_b prod>_{g-1}
//         + sum_{g'+g''=g, I disjoint J} <tau_a I>_{g'} <tau_b J>_{g''} )
//
// with the two stable seeds <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24.  The split
// sum assigns (genus, subset) to the tau_a factor; together with the 1/2 and
// the symmetric (a,b) range that counts every boundary term once.
//
// This file is one of the independent oracles: it never touches the spectral
// curve machinery, so graph sums built on it can certify recursion output.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "trec/exact.hpp"

namespace trec {

class WittenTable {
 public:
  // <tau_{d_1}...tau_{d_n}>_g; zero when unstable, negative, or off-dimension
  mpq_class value(long g, std::vector<long> d) {
    if (g < 0) return 0;
    long n = (long)d.size();
    if (n == 0 || 2 * g - 2 + n <= 0) return 0;
    for (long x : d)
      if (x < 0) return 0;
    if (std::accumulate(d.begin(), d.end(), 0l) != 3 * g - 3 + n) return 0;
    std::sort(d.begin(), d.end(), std::greater<long>());
    if (g == 0 && n == 3) return 1;                 // <tau_0^3>_0
    if (g == 1 && n == 1) return mpq_class(1, 24);  // <tau_1>_1
    auto key = std::make_pair(g, d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    mpq_class v = compute(g, d);
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  std::map<std::pair<long, std::vector<long>>, mpq_class> cache_;

  // d sorted descending, dimension/stability already checked, not a seed
  mpq_class compute(long g, const std::vector<long>& d) {
    const long d1 = d[0];
    const std::vector<long> rest(d.begin() + 1, d.end());
    const size_t m = rest.size();

    mpq_class total = 0;
    for (size_t j = 0; j < m; ++j) {
      std::vector<long> nd;
      nd.reserve(m);
      nd.push_back(d1 + rest[j] - 1);
      for (size_t i = 0; i < m; ++i)
        if (i != j) nd.push_back(rest[i]);
      mpq_class w(double_factorial_z(2 * (d1 + rest[j]) - 1),
                  double_factorial_z(2 * rest[j] - 1));
      w.canonicalize();
      total += w * value(g, nd);
    }

    mpq_class boundary = 0;
    for (long a = 0; a + 2 <= d1; ++a) {
      const long b = d1 - 2 - a;
      std::vector<long> nd = rest;
      nd.push_back(a);
      nd.push_back(b);
      mpq_class s = value(g - 1, nd);
      for (long g1 = 0; g1 <= g; ++g1)
        for (unsigned long mask = 0; mask < (1ul << m); ++mask) {
          std::vector<long> di{a}, dj{b};
          for (size_t i = 0; i < m; ++i)
            ((mask >> i) & 1u ? di : dj).push_back(rest[i]);
          s += value(g1, di) * value(g - g1, dj);
        }
      boundary += mpq_class(double_factorial_z(2 * a + 1) *
                            double_factorial_z(2 * b + 1)) *
                  s;
    }
    total += boundary / 2;
    total /= mpq_class(double_factorial_z(2 * d1 + 1));
    return total;
  }
};

inline mpq_class witten_tau(long g, const std::vector<long>& d) {
  static WittenTable table;
  return table.value(g, d);
}

}  // namespace trec
