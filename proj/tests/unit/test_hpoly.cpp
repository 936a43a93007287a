#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hfrob/hpoly.hpp"

#include <random>

using namespace hfrob;

namespace {

ZPoly random_zpoly(std::mt19937_64& rng, int nvars, int deg, int terms, int bound = 5) {
  auto monos = monomials_of_degree(nvars, deg);
  ZPoly f(IntegerRing{}, nvars, deg);
  for (int t = 0; t < terms; ++t) {
    int c = static_cast<int>(rng() % (2 * bound + 1)) - bound;
    f.add_term(monos[rng() % monos.size()], c);
  }
  return f;
}

ZPoly P(std::string_view s, int nv) { return parse_polynomial(s, nv); }

}  // namespace

TEST_CASE("grevlex is a strict total order") {
  auto monos = monomials_of_degree(4, 3);
  std::vector<Monomial> all = monos;
  for (auto& m : monomials_of_degree(4, 2)) all.push_back(m);
  for (const auto& a : all)
    for (const auto& b : all) {
      int ab = grevlex_compare(a, b), ba = grevlex_compare(b, a);
      CHECK(ab == -ba);
      CHECK((ab == 0) == (a == b));
      for (const auto& c : all)
        if (ab > 0 && grevlex_compare(b, c) > 0) CHECK(grevlex_compare(a, c) > 0);
    }
  // x0^2 > x0x1 > x1^2 > x0x2 in three variables
  CHECK(grevlex_compare(Monomial{2, 0, 0}, Monomial{1, 1, 0}) > 0);
  CHECK(grevlex_compare(Monomial{1, 1, 0}, Monomial{0, 2, 0}) > 0);
  CHECK(grevlex_compare(Monomial{0, 2, 0}, Monomial{1, 0, 1}) > 0);
  CHECK(count_monomials(4, 9) == monomials_of_degree(4, 9).size());
}

TEST_CASE("partial derivatives") {
  CHECK(partial(P("x0^4", 4), 0) == P("4*x0^3", 4));
  CHECK(partial(P("x1^3", 4), 0).is_zero());
  CHECK(partial(P("x1^3", 4), 0).degree() == 2);
}

TEST_CASE("Euler identity") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    int deg = 2 + static_cast<int>(rng() % 4);
    ZPoly f = random_zpoly(rng, 4, deg, 10);
    ZPoly lhs(IntegerRing{}, 4, deg);
    for (int i = 0; i < 4; ++i) {
      Monomial xi(4);
      xi.set(i, 1);
      lhs += partial(f, i).times_monomial(xi, 1);
    }
    CHECK(lhs == f.scaled(deg));
  }
}

TEST_CASE("Frobenius substitution") {
  CHECK(frob_substitute(P("x0 + x1", 2), 2) == P("x0^2 + x1^2", 2));
  CHECK(frob_substitute(P("x0*x1", 2), 3) == P("x0^3*x1^3", 2));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    ZPoly f = random_zpoly(rng, 3, 3, 6), g = random_zpoly(rng, 3, 2, 6);
    CHECK(frob_substitute(f, 5).degree() == 15);
    CHECK(frob_substitute(f * g, 3) == frob_substitute(f, 3) * frob_substitute(g, 3));
  }
}

TEST_CASE("multiplication is associative and commutative") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    ZPoly a = random_zpoly(rng, 4, 2, 5), b = random_zpoly(rng, 4, 3, 5), c = random_zpoly(rng, 4, 1, 4);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
  }
}

TEST_CASE("dense product agrees with sparse product") {
  std::mt19937_64 rng(4);
  ResidueRing R(3, 7);
  ZPoly a = random_zpoly(rng, 4, 8, 120, 100), b = random_zpoly(rng, 4, 6, 80, 100);
  ModPoly ma = reduce_mod(a, R), mb = reduce_mod(b, R);
  CHECK(multiply(ma, mb) == ma * mb);
}

TEST_CASE("delta examples") {
  CHECK(compute_delta(P("x0", 2), 5).is_zero());
  CHECK(compute_delta(P("x0 + x1", 2), 2) == P("-x0*x1", 2));
  CHECK(compute_delta(P("x0 + x1", 2), 3) == P("-x0^2*x1 - x0*x1^2", 2));
}

TEST_CASE("p*delta + P^p = P(x^p)") {
  std::mt19937_64 rng(5);
  for (u64 p : {2, 3, 5}) {
    for (int deg : {3, 4}) {
      ZPoly f = random_zpoly(rng, 4, deg, 8, 4);
      if (f.is_zero()) continue;
      ZPoly delta = compute_delta(f, p);
      CHECK(delta.degree() == static_cast<int>(p) * deg);
      ZPoly lhs = delta.scaled(BigInt(p)) + pow(f, static_cast<int>(p));
      CHECK(lhs == frob_substitute(f, static_cast<int>(p)));
      ResidueRing R(p, 6);
      CHECK(compute_delta_mod(f, p, 6) == reduce_mod(delta, R));
    }
  }
}

TEST_CASE("parsing") {
  ZPoly f = parse_polynomial("3*x0^2*x1*x3 - x2^4", 4);
  CHECK(f.degree() == 4);
  CHECK(f.size() == 2);
  CHECK(f.coeff(Monomial{2, 1, 0, 1}) == 3);
  CHECK_THROWS_AS(parse_polynomial("x0^3 + x1^2", 2), ParseError);
  CHECK_THROWS_AS(parse_polynomial("x0 + y", 2), ParseError);
  ZPoly g = parse_polynomial("x^4 - x*y^3 + y**2*z*w", 4, {"x", "y", "z", "w"});
  CHECK(g.coeff(Monomial{1, 3, 0, 0}) == -1);
  CHECK(g.coeff(Monomial{0, 2, 1, 1}) == 1);
  CHECK(parse_polynomial(to_string(f), 4) == f);
  // x1 must not match the prefix of x10
  ZPoly h = parse_polynomial("x10*x1^2", 2, {"x1", "x10"});
  CHECK(h.coeff(Monomial{2, 1}) == 1);
}
