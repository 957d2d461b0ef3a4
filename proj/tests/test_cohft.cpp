#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <vector>

#include "trec/dvv.hpp"
#include "trec/extract.hpp"
#include "trec/recursion.hpp"
#include "trec/compat.hpp"
#include "trec/rmatrix.hpp"
#include "trec/string_check.hpp"

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

static void tuples_rec(long total, long n, long lo, std::vector<long>& cur,
                       std::vector<std::vector<long>>& out) {
  if (n == 0) {
    if (total == 0) out.push_back(cur);
    return;
  }
  for (long d = lo; d <= total; ++d) {
    cur.push_back(d);
    tuples_rec(total - d, n - 1, d, cur, out);
    cur.pop_back();
  }
}

// For x = z^2/2, y = z the matrix part is trivial, so the psi-coefficients
// must be plain intersection numbers times the vertex unit to the power
// 2g-2+n, with unit sqrtdel = -i.
static std::map<ChiKey, Exact> airy_psi_expected(long g, long n) {
  std::map<ChiKey, Exact> out;
  std::vector<std::vector<long>> tuples;
  std::vector<long> cur;
  tuples_rec(3 * g - 3 + n, n, 0, cur, tuples);
  Exact unit = (-exact_i()).pow(2 * g - 2 + n);
  for (const auto& d : tuples) {
    mpq_class c = witten_tau(g, d);
    if (c == 0) continue;
    ChiKey key;
    for (long di : d) key.push_back({di, 0});
    out.emplace(key, unit * Exact(c));
  }
  return out;
}

TEST_CASE("one-point curve psi-coefficients are intersection numbers times the vertex unit") {
  Curve<Exact> airy = airy_curve();
  Engine<Exact> eng(airy, 2, 5);
  Extractor<Exact> ex(airy);

  REQUIRE(ex.points() == 1);
  REQUIRE(ex.point(0).L == exact_i());
  REQUIRE(ex.point(0).y1 == q(1));
  REQUIRE(ex.point(0).sqrtdel == -exact_i());

  const std::vector<std::pair<long, long>> stable = {
      {0, 3}, {0, 4}, {0, 5}, {1, 1}, {1, 2}, {1, 3}, {2, 1}, {2, 2}};
  for (auto [g, n] : stable) {
    ChiTensor<Exact> D = ex.to_psi_basis(eng.omega(g, n));
    auto exp = airy_psi_expected(g, n);
    INFO("g=" << g << " n=" << n);
    REQUIRE(D.m.size() == exp.size());
    for (const auto& [key, c] : exp) REQUIRE(D.get(key) == c);
  }

  // spot anchors, written out
  ChiTensor<Exact> d03 = ex.to_psi_basis(eng.omega(0, 3));
  REQUIRE(d03.get({{0, 0}, {0, 0}, {0, 0}}) == -exact_i());
  ChiTensor<Exact> d11 = ex.to_psi_basis(eng.omega(1, 1));
  REQUIRE(d11.get({{1, 0}}) == -exact_i() * q(1, 24));
  ChiTensor<Exact> d21 = ex.to_psi_basis(eng.omega(2, 1));
  REQUIRE(d21.get({{4, 0}}) == exact_i() * q(1, 1152));
}

TEST_CASE("one-point curve basis columns are pure monomials with the closed-form top") {
  Extractor<Exact> ex(airy_curve());
  for (long d = 0; d <= 3; ++d) {
    const auto& col = ex.column(d, 0);
    REQUIRE(col.size() == 1);
    Exact top = Exact(mpq_class(double_factorial_z(2 * d + 1))) * exact_i().pow(2 * d + 1);
    REQUIRE(col.at({2 * d + 1, 0}) == top);
  }
}

TEST_CASE("two-point curve point constants and three-point coefficients") {
  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  REQUIRE(ex.points() == 2);

  // at z=1: x''=2, so dw/dz = sqrt(-2) and L = i/sqrt(2) after the branch rule
  Exact L0(QI(), QI(mpq_class(0), mpq_class(1, 2)), mpz_class(2));
  Exact L1(QI(), QI(mpq_class(1, 2), mpq_class(0)), mpz_class(2));
  REQUIRE(ex.point(0).L == L0);
  REQUIRE(ex.point(1).L == L1);
  Exact sd0(QI(), QI(mpq_class(0), mpq_class(-1)), mpz_class(2));  // -i sqrt(2)
  Exact sd1(QI(), QI(mpq_class(1), mpq_class(0)), mpz_class(2));   //    sqrt(2)
  REQUIRE(ex.point(0).sqrtdel == sd0);
  REQUIRE(ex.point(1).sqrtdel == sd1);

  // genus-zero three-point coefficients: exactly the two diagonal entries,
  // equal to the vertex units; every mixed-point entry vanishes
  Engine<Exact> eng(cat, 1, 3);
  ChiTensor<Exact> d03 = ex.to_psi_basis(eng.omega(0, 3));
  REQUIRE(d03.m.size() == 2);
  REQUIRE(d03.get({{0, 0}, {0, 0}, {0, 0}}) == sd0);
  REQUIRE(d03.get({{0, 1}, {0, 1}, {0, 1}}) == sd1);

  // the remaining stable tensors in budget convert cleanly (the conversion
  // itself asserts exact consumption and arrangement symmetry)
  ChiTensor<Exact> d11 = ex.to_psi_basis(eng.omega(1, 1));
  REQUIRE(!d11.m.empty());
  ChiTensor<Exact> d12 = ex.to_psi_basis(eng.omega(1, 2));
  REQUIRE(!d12.m.empty());
  ChiTensor<Exact> d04 = ex.to_psi_basis(eng.omega(0, 4));
  REQUIRE(!d04.m.empty());
}

TEST_CASE("basis columns match an independent rational-function computation") {
  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  Exact L0 = ex.point(0).L;

  // build d((d/dx) xi^0) directly as a rational function and take its exact
  // partial fractions; this path shares no code with the series towers
  R xi0(P::constant(-L0), P(std::vector<Exact>{q(-1), q(1)}));
  R xp = cat.x.derivative();
  R phi1 = xi0.derivative() / xp;
  R dxi1 = phi1.derivative();

  REQUIRE(dxi1.pole_order_at(q(1)) == 4);
  REQUIRE(dxi1.pole_order_at(q(-1)) == 2);

  auto pf = partial_fractions(dxi1, {q(1), q(-1)});
  REQUIRE(pf.poly.is_zero());
  // an exact differential has no residues
  REQUIRE(pf.pp[0][0].is_zero());
  REQUIRE(pf.pp[1][0].is_zero());

  const auto& col = ex.column(1, 0);
  size_t nonzero = 0;
  for (size_t j = 0; j < 2; ++j)
    for (size_t k = 2; k <= pf.pp[j].size(); ++k) {
      Exact c = pf.pp[j][k - 1];
      if (c.is_zero()) continue;
      ++nonzero;
      REQUIRE(col.at({(long)k - 1, j}) == c);
    }
  REQUIRE(col.size() == nonzero);
}

TEST_CASE("ball backend reproduces the exact psi-coefficients") {
  using Pb = Poly<CB>;
  using Rb = RatF<CB>;
  Curve<CB> cv;
  cv.x = Rb::x() + Rb(Pb::constant(CB(1)), Pb::x());
  cv.dy = Rb::constant(CB(1));
  cv.crit = {CB::from_doubles(1.0, 3e-9), CB::from_doubles(-1.0, -2e-9)};

  Curve<Exact> cat = catalan_curve();
  Engine<Exact> eng(cat, 1, 2);
  Extractor<Exact> ex(cat);
  Engine<CB> engb(cv, 1, 2);
  Extractor<CB> exb(cv);

  for (auto [g, n] : std::vector<std::pair<long, long>>{{0, 3}, {1, 1}, {1, 2}}) {
    ChiTensor<Exact> D = ex.to_psi_basis(eng.omega(g, n));
    ChiTensor<CB> Db = exb.to_psi_basis(engb.omega(g, n));
    INFO("g=" << g << " n=" << n);
    REQUIRE(D.m.size() == Db.m.size());
    for (const auto& [key, c] : D.m) {
      CB diff = Db.get(key) - to_ball(c);
      REQUIRE(diff.abs_ub() < 1e-20);
    }
  }
}

TEST_CASE("extraction rejects what it cannot represent") {
  Extractor<Exact> ex(airy_curve());

  // an even top pole order is outside the span of the basis
  ChiTensor<Exact> bad;
  bad.n = 1;
  bad.add({{2, 0}}, q(1));
  REQUIRE_THROWS_AS(ex.to_psi_basis(bad), std::runtime_error);

  ChiTensor<Exact> bad2;
  bad2.n = 1;
  bad2.add({{3, 0}}, q(1));
  bad2.add({{2, 0}}, q(5));
  REQUIRE_THROWS_AS(ex.to_psi_basis(bad2), std::runtime_error);

  // a lone double pole at one point of a two-point curve is fine only if it
  // is the top of a genuine column; chi_(1,i) itself converts (d = 0)
  Extractor<Exact> ex2(catalan_curve());
  ChiTensor<Exact> ok;
  ok.n = 1;
  ok.add({{1, 0}}, q(3));
  ChiTensor<Exact> D = ex2.to_psi_basis(ok);
  REQUIRE(D.m.size() == 1);
  REQUIRE(D.get({{0, 0}}) == q(3) * ex2.point(0).L.inverse());

  Curve<Exact> empty = airy_curve();
  empty.crit.clear();
  REQUIRE_THROWS_AS(Extractor<Exact>(empty), std::invalid_argument);
}

TEST_CASE("one-point curve has the identity matrix series") {
  Extractor<Exact> ex(airy_curve());
  RMatrix<Exact> rm(ex, 4);

  // z(w) = i w exactly, so the regular part of the bidifferential vanishes
  for (long m = 0; m <= 4; ++m) {
    REQUIRE(rm.rinv(m, 0, 0) == (m == 0 ? q(1) : q(0)));
    REQUIRE(rm.rmat(m, 0, 0) == (m == 0 ? q(1) : q(0)));
  }
  REQUIRE(rm.check_unitarity(0.0));
  REQUIRE(rm.check_dilaton(0.0));
  REQUIRE(rm.check_product_decomposition(0.0));
}

TEST_CASE("two-point matrix series literals and structural identities") {
  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  RMatrix<Exact> rm(ex, 6);

  // hand expansion at z = 1: z(w) = 1 + z1 w - w^2/4 - (z1/16) w^3 + ...
  // with z1 = i/sqrt(2), giving a^(0,0)_{0,0} = z3/z1 - (z2/z1)^2 = 1/16;
  // mirrored with z1 = 1/sqrt(2) at z = -1
  REQUIRE(rm.rinv(1, 0, 0) == q(-1, 16));
  REQUIRE(rm.rinv(1, 1, 1) == q(1, 16));
  // cross terms: a^(0,1)_{0,0} = z1^(0) z1^(1) / 4 = i/8
  Exact mi8 = exact_i() * q(-1, 8);
  REQUIRE(rm.rinv(1, 0, 1) == mi8);
  REQUIRE(rm.rinv(1, 1, 0) == mi8);

  REQUIRE(rm.check_unitarity(0.0));
  REQUIRE(rm.check_dilaton(0.0));
  REQUIRE(rm.check_product_decomposition(0.0));
}

TEST_CASE("diagonal matrix entries match a univariate log-derivative") {
  // on the diagonal the regular part restricted to w_i = 0 is
  // d_w' [ (d_1 D)(0,w') / D(0,w') ] for the divided difference D, and both
  // restrictions are plain univariate series in w' we can form directly
  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  long ord = 4;
  RMatrix<Exact> rm(ex, ord);
  long len = 2 * ord + 4;

  for (size_t i = 0; i < 2; ++i) {
    Laurent<Exact> vz = ex.local_inverse(i, len);
    Laurent<Exact> d0 = vz.shifted_exp(-1);
    Laurent<Exact> d1 =
        (vz - Laurent<Exact>::monomial(vz.coeff(1), 1, len + 1)).shifted_exp(-2);
    Laurent<Exact> row = (d1 * d0.inverse()).derivative();
    for (long m = 0; m <= 2 * ord; ++m)
      REQUIRE(rm.a_coeff(i, i, 0, m) == row.coeff_clipped(m));
  }
}

TEST_CASE("ball backend matrix series agrees with the exact one") {
  using Pb = Poly<CB>;
  using Rb = RatF<CB>;
  Curve<CB> cv;
  cv.x = Rb::x() + Rb(Pb::constant(CB(1)), Pb::x());
  cv.dy = Rb::constant(CB(1));
  cv.crit = {CB::from_doubles(1.0, 3e-9), CB::from_doubles(-1.0, -2e-9)};

  Curve<Exact> cat = catalan_curve();
  Extractor<Exact> ex(cat);
  RMatrix<Exact> rm(ex, 4);
  Extractor<CB> exb(cv);
  RMatrix<CB> rmb(exb, 4);

  for (long m = 0; m <= 4; ++m)
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) {
        CB diff = rmb.rinv(m, i, j) - to_ball(rm.rinv(m, i, j));
        REQUIRE(diff.abs_ub() < 1e-20);
      }
  REQUIRE(rmb.check_unitarity(1e-25));
  REQUIRE(rmb.check_dilaton(1e-25));
  REQUIRE(rmb.check_product_decomposition(1e-25));
}

TEST_CASE("string equation holds across the computed tower") {
  Curve<Exact> airy = airy_curve();
  Engine<Exact> eng(airy, 2, 5);
  for (auto [g, n] : std::vector<std::pair<long, long>>{{0, 3}, {0, 4}, {1, 1}, {1, 2}, {2, 1}}) {
    INFO("g=" << g << " n=" << n);
    REQUIRE(string_equation_holds(airy, eng.omega(g, n + 1), eng.omega(g, n)));
  }

  // same x as the Catalan curve but with dy = dz/z, so y has a full Taylor
  // tail at the ramification points instead of a single linear term
  Curve<Exact> ds = catalan_curve();
  ds.dy = R(P::constant(q(1)), P::x());
  Engine<Exact> eng2(ds, 1, 3);
  for (auto [g, n] : std::vector<std::pair<long, long>>{{0, 3}, {1, 1}, {1, 2}}) {
    INFO("g=" << g << " n=" << n);
    REQUIRE(string_equation_holds(ds, eng2.omega(g, n + 1), eng2.omega(g, n)));
  }

  // negative control: scaling one coefficient must break the identity
  ChiTensor<Exact> corrupted = eng.omega(0, 4);
  corrupted.m.begin()->second *= q(2);
  REQUIRE_FALSE(string_equation_holds(airy, corrupted, eng.omega(0, 3)));
}

TEST_CASE("deck-involution compatibility of the defining one-form") {
  REQUIRE(compatibility_holds(airy_curve()));

  Curve<Exact> cat = catalan_curve();  // dy = dz
  REQUIRE(compatibility_holds(cat));

  Curve<Exact> ds = cat;
  ds.dy = R(P::constant(q(1)), P::x());  // dy = dz/z
  REQUIRE(compatibility_holds(ds));

  Curve<Exact> bad = cat;
  bad.dy = R(P(std::vector<Exact>{q(0), q(2)}), P::constant(q(1)));  // dy = 2z dz
  REQUIRE_FALSE(compatibility_holds(bad));
}
