#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "trec/dvv.hpp"
#include "trec/extract.hpp"
#include "trec/graphs.hpp"
#include "trec/recursion.hpp"

using namespace trec;
using P = Poly<Exact>;
using R = RatF<Exact>;

static Exact q(long n, long d = 1) { return Exact(mpq_class(n, d)); }

static Curve<Exact> airy_curve() {
  Curve<Exact> cv;
  cv.x = R(P(std::vector<Exact>{q(0), q(0), q(1, 2)}), P::constant(q(1)));
  cv.dy = R::constant(q(1));
  cv.crit = {q(0)};
  return cv;
}

static Curve<Exact> catalan_curve() {
  Curve<Exact> cv;
  cv.x = R::x() + R(P::constant(q(1)), P::x());
  cv.dy = R::constant(q(1));
  cv.crit = {q(1), q(-1)};
  return cv;
}

static std::vector<long> aut_orders(const std::vector<StableGraph>& gs) {
  std::vector<long> a;
  for (const auto& G : gs) a.push_back(G.aut);
  std::sort(a.begin(), a.end());
  return a;
}

static void require_tensors_equal(const ChiTensor<Exact>& A, const ChiTensor<Exact>& B) {
  for (const auto& [k, c] : A.m) {
    INFO("key " << key_str(k));
    REQUIRE(B.get(k) == c);
  }
  for (const auto& [k, c] : B.m) {
    INFO("key " << key_str(k));
    REQUIRE(A.get(k) == c);
  }
}

TEST_CASE("stable graph enumeration matches hand counts") {
  auto g03 = stable_graphs(0, 3);
  REQUIRE(g03.size() == 1);
  REQUIRE(g03[0].aut == 1);
  REQUIRE(g03[0].gv == std::vector<long>{0});

  // one smooth vertex, or a two-vertex tree with a 2|2 split of the leaves
  REQUIRE(stable_graphs(0, 4).size() == 4);

  // smooth genus-one vertex, or a genus-zero vertex with a self-loop
  auto g11 = stable_graphs(1, 1);
  REQUIRE(g11.size() == 2);
  REQUIRE(aut_orders(g11) == std::vector<long>{1, 2});

  REQUIRE(stable_graphs(1, 2).size() == 5);

  // the classical seven strata of the genus-two moduli space:
  // smooth; irreducible one-node; two elliptic pieces; elliptic piece with a
  // self-loop partner; double self-loop; theta; dumbbell
  auto g20 = stable_graphs(2, 0);
  REQUIRE(g20.size() == 7);
  REQUIRE(aut_orders(g20) == std::vector<long>{1, 2, 2, 2, 8, 8, 12});
}

TEST_CASE("one-point graph sum collapses to a single vertex") {
  // with one ramification point the matrix series is the identity, every
  // dilaton leaf vanishes, and only the smooth one-vertex graph survives
  Curve<Exact> airy = airy_curve();
  Engine<Exact> eng(airy, 2, 5);
  Extractor<Exact> ex(airy);
  RMatrix<Exact> rm(ex, 5);
  GraphOracle<Exact> go(ex, rm);

  for (auto [g, n] : std::vector<std::pair<long, long>>{
           {0, 3}, {0, 4}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
    INFO("g=" << g << " n=" << n);
    require_tensors_equal(ex.to_psi_basis(eng.omega(g, n)), go.tensor(g, n));
  }
}

TEST_CASE("two-point graph sum anchors at one marked point") {
  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  RMatrix<Exact> rm(ex, 3);
  GraphOracle<Exact> go(ex, rm);

  // genus one, one leaf carrying psi: both graphs need their full budget on
  // the leaf, so only the smooth vertex contributes, <tau_1>_1 = 1/24
  Exact a1 = go.correlator(1, {{1, 0}});
  REQUIRE(a1 == Exact(QI(), QI(mpq_class(0), mpq_class(-1, 24)), mpz_class(2)));

  // genus one, bare leaf: in units of i sqrt(2)/384 the smooth vertex gives
  // +1 (leg order one, same point), -2 (leg order one, other point) and -3
  // (dilaton leaf), the self-loop graph -12; total -16/384 = -1/24
  Exact a0 = go.correlator(1, {{0, 0}});
  REQUIRE(a0 == Exact(QI(), QI(mpq_class(0), mpq_class(-1, 24)), mpz_class(2)));
}

TEST_CASE("graph sum reproduces the recursion tensors on a two-point curve") {
  Curve<Exact> cat = catalan_curve();
  Engine<Exact> eng(cat, 2, 5);
  Extractor<Exact> ex(cat);
  RMatrix<Exact> rm(ex, 5);
  GraphOracle<Exact> go(ex, rm);

  for (auto [g, n] : std::vector<std::pair<long, long>>{
           {0, 3}, {0, 4}, {1, 1}, {1, 2}, {2, 1}}) {
    INFO("g=" << g << " n=" << n);
    require_tensors_equal(ex.to_psi_basis(eng.omega(g, n)), go.tensor(g, n));
  }
}

TEST_CASE("graph sum matches the recursion with a nontrivial defining form") {
  // same x, dy = dz/z: the one-form now has a full Taylor tail at both
  // ramification points, so the dilaton leaves probe every series order
  Curve<Exact> ds = catalan_curve();
  ds.dy = R(P::constant(q(1)), P::x());
  Engine<Exact> eng(ds, 1, 3);
  Extractor<Exact> ex(ds);
  RMatrix<Exact> rm(ex, 4);
  GraphOracle<Exact> go(ex, rm);

  for (auto [g, n] : std::vector<std::pair<long, long>>{{0, 3}, {1, 1}, {1, 2}}) {
    INFO("g=" << g << " n=" << n);
    require_tensors_equal(ex.to_psi_basis(eng.omega(g, n)), go.tensor(g, n));
  }
}
