#pragma once
// Stable-graph sums: the R-matrix action on a semisimple topological field
// theory, evaluated at correlator level.
//
//   <prod_j psi^{d_j} e_{i_j}>_g
//     = sum over stable graphs of genus g with n labeled leaves,
//       1/|Aut|, sum over vertex colorings by ramification points,
//       product over vertices of
//         Delta^{(2g_v-2+k_v)/2} <tau insertions>_{g_v}   (Witten numbers)
//       with half-edge insertions
//         leaf j:       tau_{d_j+m} weighted by (Rinv_m)^{color}_{i_j},
//         dilaton leaf: tau_{a} weighted by -[Rinv_{a-1} 1]^{color}, a >= 2,
//                       any number per vertex, 1/m! apiece
//                       (the decoration psi (I - Rinv(psi)) e_1; the sign is
//                       pinned by matching the recursion, see the tests),
//         edge:         tau_a (x) tau_b weighted by the kernel
//                       [delta - sum_s Rinv(x) Rinv(y)]/(x+y), whose
//                       coefficients are (2a-1)!!(2b-1)!! a^(i,j)_{2a,2b}.
//
// Everything here is built from the matrix series, the vertex units and the
// psi intersection numbers alone — no residues, no recursion kernel — so it
// is an independent cross-check for the recursion-plus-extraction pipeline.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "trec/chi_tensor.hpp"
#include "trec/dvv.hpp"
#include "trec/extract.hpp"
#include "trec/rmatrix.hpp"

namespace trec {

struct StableGraph {
  std::vector<long> gv;                    // vertex genera
  std::vector<std::pair<int, int>> edges;  // unordered pairs u <= v, sorted
  std::vector<int> legv;                   // leaf j -> vertex
  long aut = 1;                            // half-edge automorphisms fixing the leaves
};

namespace graph_detail {

inline std::string shape_string(const std::vector<long>& gv,
                                std::vector<std::pair<int, int>> ed,
                                const std::vector<int>& legv) {
  std::sort(ed.begin(), ed.end());
  std::string s;
  for (long x : gv) s += std::to_string(x) + ",";
  s += "|";
  for (const auto& [a, b] : ed) s += std::to_string(a) + "-" + std::to_string(b) + ",";
  s += "|";
  for (int v : legv) s += std::to_string(v) + ",";
  return s;
}

inline std::string permuted_string(const std::vector<long>& gv,
                                   const std::vector<std::pair<int, int>>& ed,
                                   const std::vector<int>& legv,
                                   const std::vector<int>& p) {
  std::vector<long> g2(gv.size());
  for (size_t v = 0; v < gv.size(); ++v) g2[p[v]] = gv[v];
  std::vector<std::pair<int, int>> e2;
  e2.reserve(ed.size());
  for (const auto& [a, b] : ed)
    e2.push_back({std::min(p[a], p[b]), std::max(p[a], p[b])});
  std::vector<int> l2(legv.size());
  for (size_t j = 0; j < legv.size(); ++j) l2[j] = p[legv[j]];
  return shape_string(g2, e2, l2);
}

inline bool connected(size_t V, const std::vector<std::pair<int, int>>& ed) {
  std::vector<int> root(V);
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (const auto& [a, b] : ed) root[find(a)] = find(b);
  for (size_t v = 1; v < V; ++v)
    if (find((int)v) != find(0)) return false;
  return true;
}

}  // namespace graph_detail

// all isomorphism classes of stable graphs of genus g with n labeled leaves
inline std::vector<StableGraph> stable_graphs(long g, long n) {
  using namespace graph_detail;
  std::vector<StableGraph> out;
  long vmax = std::max<long>(1, 2 * g - 2 + n);  // sum_v (2g_v-2+k_v) = 2g-2+n >= V

  for (long V = 1; V <= vmax; ++V) {
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < V; ++u)
      for (int v = u; v < V; ++v) pairs.push_back({u, v});

    std::vector<long> gv(V, 0);
    for (;;) {  // odometer over genus assignments
      long gsum = std::accumulate(gv.begin(), gv.end(), 0l);
      long E = g - gsum + V - 1;
      if (E >= 0) {
        // multisets of E edges over the pair list
        std::vector<std::pair<int, int>> ed;
        std::vector<size_t> pick;
        auto edges_done = [&]() {
          if (!connected(V, ed)) return;
          std::vector<long> val(V, 0);
          for (const auto& [a, b] : ed) {
            ++val[a];
            ++val[b];
          }
          std::vector<int> legv(n, 0);
          for (;;) {  // odometer over leaf placements
            std::vector<long> k = val;
            for (int v : legv) ++k[v];
            bool stable = true;
            for (long v = 0; v < V && stable; ++v)
              if (2 * gv[v] - 2 + k[v] <= 0) stable = false;
            if (stable) {
              // keep only the labeling that realizes the minimal string
              std::string cur = shape_string(gv, ed, legv);
              std::vector<int> p(V);
              std::iota(p.begin(), p.end(), 0);
              bool canonical = true;
              long stab = 0;
              do {
                std::string s = permuted_string(gv, ed, legv, p);
                if (s < cur) {
                  canonical = false;
                  break;
                }
                if (s == cur) ++stab;
              } while (std::next_permutation(p.begin(), p.end()));
              if (canonical) {
                StableGraph G;
                G.gv = gv;
                G.edges = ed;
                std::sort(G.edges.begin(), G.edges.end());
                G.legv = legv;
                long loops = 0;
                mpz_class a = stab;
                for (size_t e = 0; e < G.edges.size();) {
                  size_t f = e;
                  while (f < G.edges.size() && G.edges[f] == G.edges[e]) ++f;
                  a *= factorial_z((unsigned long)(f - e));
                  if (G.edges[e].first == G.edges[e].second) loops += (long)(f - e);
                  e = f;
                }
                for (long l = 0; l < loops; ++l) a *= 2;
                G.aut = (long)a.get_si();
                out.push_back(std::move(G));
              }
            }
            size_t j = 0;
            while (j < (size_t)n && ++legv[j] == V) legv[j++] = 0;
            if (j == (size_t)n) break;
          }
        };
        // recursive multiset choice (nondecreasing pick indices)
        std::function<void(size_t, long)> choose = [&](size_t from, long left) {
          if (left == 0) {
            edges_done();
            return;
          }
          for (size_t i = from; i < pairs.size(); ++i) {
            ed.push_back(pairs[i]);
            choose(i, left - 1);
            ed.pop_back();
          }
        };
        choose(0, E);
      }
      size_t j = 0;
      while (j < (size_t)V && ++gv[j] > g) gv[j++] = 0;
      if (j == (size_t)V) break;
    }
  }
  return out;
}

template <class S>
class GraphOracle {
 public:
  GraphOracle(Extractor<S>& ex, RMatrix<S>& rm) : ex_(ex), rm_(rm), np_(ex.points()) {}

  // <prod_j psi^{d_j} e_{i_j}>_g with ins[j] = (d_j, i_j)
  S correlator(long g, const ChiKey& ins) {
    long n = (long)ins.size();
    if (3 * g - 3 + n > rm_.order())
      throw std::invalid_argument("graph oracle: matrix series order below the moduli dimension");
    S total(0);
    for (const StableGraph& G : graphs(g, n)) {
      size_t V = G.gv.size();
      std::vector<std::vector<std::pair<long, size_t>>> legs(V);
      for (size_t j = 0; j < ins.size(); ++j)
        legs[(size_t)G.legv[j]].push_back({ins[j].first, ins[j].second});

      S gtotal(0);
      std::vector<size_t> col(V, 0);
      for (;;) {
        gtotal += colored_sum(G, legs, col);
        size_t p = 0;
        while (p < V && ++col[p] == np_) col[p++] = 0;
        if (p == V) break;
      }
      total += gtotal * s_from_q<S>(mpq_class(1, G.aut));
    }
    return total;
  }

  // the full correlator tensor for (g,n), keys {(d_j, i_j)} as produced by
  // the psi-basis extraction
  ChiTensor<S> tensor(long g, long n) {
    ChiTensor<S> out;
    out.n = n;
    ChiKey key;
    long dim = 3 * g - 3 + n;
    std::function<void(long, ChiVar)> walk = [&](long left, ChiVar lo) {
      if ((long)key.size() == n) {
        S v = correlator(g, key);
        if (!is_exactly_zero(v) && !negligible(v, 1e-35)) out.add(key, v);
        return;
      }
      for (long d = lo.first; d <= left; ++d)
        for (size_t i = (d == lo.first ? lo.second : 0); i < np_; ++i) {
          key.push_back({d, i});
          walk(left - d, {d, i});
          key.pop_back();
        }
    };
    walk(dim, {0, 0});
    return out;
  }

 private:
  Extractor<S>& ex_;
  RMatrix<S>& rm_;
  size_t np_;
  std::map<std::pair<long, long>, std::vector<StableGraph>> gmemo_;

  const std::vector<StableGraph>& graphs(long g, long n) {
    auto k = std::make_pair(g, n);
    auto it = gmemo_.find(k);
    if (it == gmemo_.end()) it = gmemo_.emplace(k, stable_graphs(g, n)).first;
    return it->second;
  }

  // edge kernel coefficient at powers (a,b), colors (i,j)
  S phi_edge(size_t i, size_t j, long a, long b) {
    S f = s_from_q<S>(mpq_class(double_factorial_z(2 * a - 1) * double_factorial_z(2 * b - 1)));
    return f * rm_.a_coeff(i, j, 2 * a, 2 * b);
  }

  // dilaton-leaf coefficient of psi^a at color t (a >= 2)
  S tail_fac(long a, size_t t) {
    S acc(0);
    for (size_t s = 0; s < np_; ++s)
      acc += rm_.rinv(a - 1, t, s) * inv_of(ex_.point(s).sqrtdel);
    return -acc;
  }

  // one vertex: sum over leaf series orders and dilaton tails.  powers holds
  // the tau indices fixed so far (edge halves first); rem is the remaining
  // net dimension, where a leaf order m costs m and a tail tau_a costs a-1.
  S vertex_bracket(long gvv, size_t t, std::vector<long>& powers,
                   const std::vector<std::pair<long, size_t>>& lg, size_t li,
                   long rem, const S& fac, long ntails) {
    if (li < lg.size()) {
      S acc(0);
      for (long m = 0; m <= rem; ++m) {
        S rf = rm_.rinv(m, t, lg[li].second);
        if (is_exactly_zero(rf)) continue;
        powers.push_back(lg[li].first + m);
        acc += vertex_bracket(gvv, t, powers, lg, li + 1, rem - m, fac * rf, ntails);
        powers.pop_back();
      }
      return acc;
    }
    S acc(0);
    if (rem == 0) {
      mpq_class w = witten_tau(gvv, powers);
      if (w != 0) {
        w /= mpq_class(factorial_z((unsigned long)ntails));
        long k = (long)powers.size();
        acc += fac * s_from_q<S>(w) * pow_of(ex_.point(t).sqrtdel, 2 * gvv - 2 + k);
      }
      return acc;  // no room left for further tails
    }
    for (long c = 1; c <= rem; ++c) {
      S tf = tail_fac(c + 1, t);
      if (is_exactly_zero(tf)) continue;
      powers.push_back(c + 1);
      acc += vertex_bracket(gvv, t, powers, lg, li, rem - c, fac * tf, ntails + 1);
      powers.pop_back();
    }
    return acc;
  }

  S colored_sum(const StableGraph& G,
                const std::vector<std::vector<std::pair<long, size_t>>>& legs,
                const std::vector<size_t>& col) {
    size_t V = G.gv.size();
    std::vector<long> avail(V);
    for (size_t v = 0; v < V; ++v) {
      long k = (long)legs[v].size();
      for (const auto& [a, b] : G.edges) {
        if ((size_t)a == v) ++k;
        if ((size_t)b == v) ++k;
      }
      avail[v] = 3 * G.gv[v] - 3 + k;
      for (const auto& [d, i] : legs[v]) {
        (void)i;
        avail[v] -= d;
      }
      if (avail[v] < 0) return S(0);
    }
    std::vector<std::vector<long>> fixed(V);
    std::vector<long> used(V, 0);
    return edges_rec(G, legs, col, fixed, avail, used, 0);
  }

  S edges_rec(const StableGraph& G,
              const std::vector<std::vector<std::pair<long, size_t>>>& legs,
              const std::vector<size_t>& col, std::vector<std::vector<long>>& fixed,
              const std::vector<long>& avail, std::vector<long>& used, size_t ei) {
    size_t V = G.gv.size();
    if (ei == G.edges.size()) {
      S prod(1);
      for (size_t v = 0; v < V; ++v) {
        std::vector<long> powers = fixed[v];
        S vb = vertex_bracket(G.gv[v], col[v], powers, legs[v], 0,
                              avail[v] - used[v], S(1), 0);
        if (is_exactly_zero(vb)) return S(0);
        prod *= vb;
      }
      return prod;
    }
    auto [u, v] = G.edges[ei];
    S acc(0);
    for (long a = 0; used[u] + a <= avail[u]; ++a) {
      fixed[u].push_back(a);
      used[u] += a;
      for (long b = 0; used[v] + b <= avail[v]; ++b) {
        S pf = phi_edge(col[u], col[v], a, b);
        if (is_exactly_zero(pf)) continue;
        fixed[v].push_back(b);
        used[v] += b;
        acc += pf * edges_rec(G, legs, col, fixed, avail, used, ei + 1);
        fixed[v].pop_back();
        used[v] -= b;
      }
      fixed[u].pop_back();
      used[u] -= a;
    }
    return acc;
  }
};

}  // namespace trec
