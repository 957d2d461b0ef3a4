#include <catch2/catch_amalgamated.hpp>

#include "trec/exact.hpp"
#include "trec/ratfun.hpp"
#include "trec/series.hpp"

using namespace trec;
using P = Poly<Exact>;
using L = Laurent<Exact>;
using R = RatF<Exact>;

static Exact q(long n, long d = 1) { return Exact(mpq_class(n, d)); }

TEST_CASE("polynomial division and gcd") {
  P x = P::x();
  P one = P::constant(q(1));
  P f = x * x * x - one;
  P quo, rem;
  divrem(f, x - one, quo, rem);
  REQUIRE(rem.is_zero());
  REQUIRE(quo == x * x + x + one);

  P g = poly_gcd(x * x - one, x * x - q(2) * x + one);
  REQUIRE(g == x - one);  // gcd comes out monic

  P sh = (x * x).shifted(q(1));  // (t+1)^2
  REQUIRE(sh.coeff(0) == q(1));
  REQUIRE(sh.coeff(1) == q(2));
  REQUIRE(sh.coeff(2) == q(1));
}

TEST_CASE("laurent window bookkeeping") {
  L f = L::from(-1, {q(3), q(5), q(1)});  // 3/w + 5 + w, exact
  REQUIRE(f.residue() == q(3));
  REQUIRE(f.coeff(0) == q(5));
  REQUIRE(f.coeff(-4) == q(0));  // below the window: provably zero
  REQUIRE(f.trunc() == kLaurentInf);

  L g = f.truncated(3);
  REQUIRE(g.trunc() == 3);
  REQUIRE_THROWS(g.coeff(3));  // beyond the window: unknown, not zero

  L prod = L::from(0, {q(1), q(1)}) * L::from(0, {q(1), q(-1)});
  REQUIRE(prod.trunc() == kLaurentInf);
  REQUIRE(prod.coeff(0) == q(1));
  REQUIRE(prod.coeff(1) == q(0));
  REQUIRE(prod.coeff(2) == q(-1));
}

TEST_CASE("laurent inverse and division") {
  // 1/(1-w) = 1 + w + w^2 + ...
  L f = L::from(0, {q(1), q(-1)}).truncated(6);
  L inv = f.inverse();
  for (long k = 0; k < 6; ++k) REQUIRE(inv.coeff(k) == q(1));
  REQUIRE((f * inv - L::from(0, {q(1)}, 6)).window_negligible(0.0));

  // infinite windows must be truncated first
  REQUIRE_THROWS(L::from(0, {q(1), q(-1)}).inverse());

  // inversion shifts valuation: 1/(w^2 (1+w))
  L h = L::from(2, {q(1), q(1)}).truncated(6).inverse();
  REQUIRE(h.val() == -2);
  REQUIRE(h.coeff(-2) == q(1));
  REQUIRE(h.coeff(-1) == q(-1));
  REQUIRE(h.coeff(0) == q(1));
}

TEST_CASE("derivative and antiderivative") {
  L f = L::from(-2, {q(4), q(0), q(7), q(3)});
  L df = f.derivative();
  REQUIRE(df.coeff(-3) == q(-8));
  REQUIRE(df.coeff(0) == q(3));
  L back = df.antiderivative();
  REQUIRE(back.coeff(-2) == q(4));
  REQUIRE(back.coeff(1) == q(3));
  // a 1/w term has no Laurent antiderivative
  REQUIRE_THROWS(L::from(-1, {q(1)}).antiderivative());
}

TEST_CASE("composition with laurent outer part") {
  // outer y^{-2}, inner 2w + w^2:  (2w+w^2)^{-2} = 1/4 w^{-2} - 1/4 w^{-1} + 3/16 - ...
  L outer = L::from(-2, {q(1)}).truncated(1);
  L inner = L::from(1, {q(2), q(1)}).truncated(8);
  L c = outer.compose(inner);
  REQUIRE(c.coeff(-2) == q(1, 4));
  REQUIRE(c.coeff(-1) == q(-1, 4));
  REQUIRE(c.coeff(0) == q(3, 16));
}

TEST_CASE("reversion gives catalan numbers") {
  // g with f(g(w)) = w for f = w - w^2; g = sum_k Catalan_k w^{k+1}
  L f = L::from(1, {q(1), q(-1)}).truncated(8);
  L g = f.reversion();
  REQUIRE(g.coeff(1) == q(1));
  REQUIRE(g.coeff(2) == q(1));
  REQUIRE(g.coeff(3) == q(2));
  REQUIRE(g.coeff(4) == q(5));
  REQUIRE(g.coeff(5) == q(14));
  REQUIRE(g.coeff(6) == q(42));
  REQUIRE(g.coeff(7) == q(132));
  L id = f.compose(g);
  REQUIRE((id - L::from(1, {q(1)}).truncated(id.trunc())).window_negligible(0.0));
}

TEST_CASE("square root of a unit series") {
  L s = L::from(0, {q(1), q(2), q(1)}).truncated(7);  // (1+w)^2
  L r = sqrt_one_plus(s - L::from(0, {q(1)}, 7));
  REQUIRE(r.coeff(0) == q(1));
  REQUIRE(r.coeff(1) == q(1));
  for (long k = 2; k < 7; ++k) REQUIRE(r.coeff(k) == q(0));
}

TEST_CASE("rational function expansion at finite points") {
  // 1/(z(z-1)) = -1/z - 1 - z - z^2 - ... at z=0
  P x = P::x();
  P one = P::constant(q(1));
  R f(one, x * (x - one));
  L e = f.expand_at(q(0), 5);
  REQUIRE(e.val() == -1);
  REQUIRE(e.coeff(-1) == q(-1));
  REQUIRE(e.coeff(0) == q(-1));
  REQUIRE(e.coeff(3) == q(-1));
  REQUIRE(f.residue_at(q(0)) == q(-1));
  REQUIRE(f.residue_at(q(1)) == q(1));
  REQUIRE(f.pole_order_at(q(0)) == 1);
  REQUIRE(f.pole_order_at(q(2)) == 0);
}

TEST_CASE("rational function expansion at infinity") {
  // (z^2+1)/z = z + 1/z ; in u = 1/z this reads u^{-1} + u
  P x = P::x();
  R f(P(std::vector<Exact>{q(1), q(0), q(1)}), x);
  L e = f.expand_at_infinity(4);
  REQUIRE(e.coeff(-1) == q(1));
  REQUIRE(e.coeff(0) == q(0));
  REQUIRE(e.coeff(1) == q(1));
  REQUIRE(e.coeff(2) == q(0));
  // residue at infinity of 1/z is -1 (sum over all poles is zero)
  R g(P::constant(q(1)), x);
  REQUIRE(g.residue_at_infinity() == q(-1));
  REQUIRE(g.residue_at(q(0)) + g.residue_at_infinity() == q(0));
}

TEST_CASE("rational arithmetic reduces to lowest terms") {
  P x = P::x();
  P one = P::constant(q(1));
  R f(x * x - one, x - one);
  REQUIRE(f.den.deg() == 0);  // cancels to z+1
  REQUIRE(f.eval(q(2)) == q(3));

  R a = R::x() + R(one, x);
  R b = a * a;  // (z + 1/z)^2
  REQUIRE(b.eval(q(2)) == q(25, 4));
  REQUIRE(b.derivative().eval(q(2)) == q(15, 4));
}

TEST_CASE("partial fractions recover the building blocks") {
  P x = P::x();
  P one = P::constant(q(1));
  // f = (z+3) + 2/(z-1)^2 + 5/(z+2)
  R f = R::from_poly(x + P::constant(q(3)));
  f += R(P::constant(q(2)), (x - one) * (x - one));
  f += R(P::constant(q(5)), x + P::constant(q(2)));

  auto pf = partial_fractions(f, {q(1), q(-2)});
  REQUIRE(pf.poly.coeff(0) == q(3));
  REQUIRE(pf.poly.coeff(1) == q(1));
  REQUIRE(pf.pp[0].size() == 2);
  REQUIRE(pf.pp[0][0] == q(0));  // no simple-pole part at z=1
  REQUIRE(pf.pp[0][1] == q(2));
  REQUIRE(pf.pp[1].size() == 1);
  REQUIRE(pf.pp[1][0] == q(5));

  // an incomplete pole list is an error, not a silent truncation
  REQUIRE_THROWS(partial_fractions(f, {q(1)}));
}
