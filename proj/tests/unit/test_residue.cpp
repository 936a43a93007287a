#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hfrob/residue.hpp"

#include <random>

using namespace hfrob;
using boost::multiprecision::cpp_rational;

TEST_CASE("valuation of residues") {
  CHECK(val(PResidue(3, 4, 18)) == Valuation{2, false});
  CHECK(val(PResidue(3, 4, 0)) == Valuation{4, true});
  CHECK(val(PResidue(2, 6, 48)) == Valuation{4, false});
}

TEST_CASE("unit inversion") {
  CHECK(invert_unit(PResidue(3, 3, 2)).value() == 14);
  CHECK(invert_unit(PResidue(7, 5, 1)).value() == 1);
  CHECK_THROWS_AS(invert_unit(PResidue(3, 3, 3)), NotInvertible);
}

TEST_CASE("inversion round trip for p <= 19, m <= 13") {
  std::mt19937_64 rng(11);
  for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19}) {
    for (int m = 1; m <= 13; ++m) {
      ResidueRing R(p, m);
      if (R.modulus() == 0) continue;
      for (int t = 0; t < 20; ++t) {
        u64 a = rng() % R.modulus();
        if (a % p == 0) a = (a + 1) % R.modulus();
        if (a % p == 0) continue;
        PResidue x(R, a);
        PResidue y = invert_unit(x);
        CHECK((x * y).value() == R.one());
        CHECK(invert_unit(y) == x);
      }
    }
  }
}

TEST_CASE("valuation of products saturates at the precision") {
  std::mt19937_64 rng(5);
  for (u64 p : {2, 3, 5, 7}) {
    ResidueRing R(p, 6);
    for (int t = 0; t < 500; ++t) {
      u64 a = rng() % R.modulus(), b = rng() % R.modulus();
      PResidue x(R, a), y(R, b);
      int expect = std::min(R.valuation(a) + R.valuation(b), 6);
      CHECK(val(x * y).value == expect);
    }
  }
}

TEST_CASE("mixed precision truncates to the minimum") {
  PResidue a(5, 3, 124), b(5, 2, 1);
  PResidue c = a + b;
  CHECK(c.precision() == 2);
  CHECK(c.value() == (124 + 1) % 25);
  CHECK((a * b).precision() == 2);
}

TEST_CASE("divide_tracked examples") {
  auto a = ScaledResidue::from_residue(3, 2, 5, 0);
  auto r = divide_tracked(a, BigInt(3));
  CHECK(r.unit() == 2);
  CHECK(r.shift() == -1);
  CHECK(r.relative_precision() == 5);
  CHECK(r.absolute_precision() == 4);

  auto b = ScaledResidue::from_residue(3, 1, 5, 2);
  auto q = divide_tracked(b, BigInt(6));
  CHECK(q.shift() == 1);
  CHECK(q.unit() == ResidueRing(3, 5).inverse(2).value());

  auto c = ScaledResidue::from_residue(3, 1, 5, 0);
  auto u = divide_tracked(c, BigInt(1));
  CHECK(u.unit() == 1);
  CHECK(u.shift() == 0);
  CHECK(u.absolute_precision() == 5);
}

TEST_CASE("exhausted relative precision is indeterminate") {
  auto z = ScaledResidue::from_residue(5, 0, 3, 0);
  CHECK(z.indeterminate());
  CHECK(z.absolute_precision() == 3);
  auto w = divide_tracked(z, BigInt(25));
  CHECK(w.absolute_precision() == 1);
}

namespace {

// random p^k * u with |k| small, known to absolute precision k + rel
struct Sample {
  ScaledResidue s;
  cpp_rational exact;
};

Sample random_scaled(std::mt19937_64& rng, u64 p) {
  int shift = static_cast<int>(rng() % 7) - 3;
  int rel = 1 + static_cast<int>(rng() % 6);
  u64 mod = ipow(p, rel);
  u64 u = rng() % mod;
  if (u % p == 0) u = (u + 1) % mod;
  if (u % p == 0) u = 1;
  cpp_rational pk = cpp_rational(boost::multiprecision::pow(BigInt(p), std::abs(shift)));
  cpp_rational exact = shift >= 0 ? cpp_rational(BigInt(u)) * pk : cpp_rational(BigInt(u)) / pk;
  return {ScaledResidue::from_residue(p, u, rel, shift), exact};
}

// x agrees with the rational q to absolute precision a
bool congruent(const ScaledResidue& x, const cpp_rational& q, int a, u64 p) {
  cpp_rational diff = x.to_rational() - q;
  if (diff == 0) return true;
  BigInt num = boost::multiprecision::numerator(diff);
  BigInt den = boost::multiprecision::denominator(diff);
  return vp(num, p) - vp(den, p) >= a;
}

}  // namespace

TEST_CASE("scaled residue arithmetic agrees with rational arithmetic") {
  std::mt19937_64 rng(2024);
  for (u64 p : {2, 3, 5, 7}) {
    for (int t = 0; t < 400; ++t) {
      Sample a = random_scaled(rng, p), b = random_scaled(rng, p);
      ScaledResidue s = a.s + b.s;
      CHECK(s.absolute_precision() == std::min(a.s.absolute_precision(), b.s.absolute_precision()));
      CHECK(congruent(s, a.exact + b.exact, s.absolute_precision(), p));
      ScaledResidue m = a.s * b.s;
      CHECK(m.absolute_precision() ==
            std::min(a.s.absolute_precision() + b.s.shift(), b.s.absolute_precision() + a.s.shift()));
      CHECK(congruent(m, a.exact * b.exact, m.absolute_precision(), p));
      ScaledResidue d = a.s - b.s;
      CHECK(congruent(d, a.exact - b.exact, d.absolute_precision(), p));
      i64 divisor = 1 + static_cast<i64>(rng() % 200);
      ScaledResidue q = divide_tracked(a.s, BigInt(divisor));
      CHECK(q.absolute_precision() == a.s.absolute_precision() - vp(divisor, p));
      CHECK(congruent(q, a.exact / divisor, q.absolute_precision(), p));
    }
  }
}

TEST_CASE("unipoly gauss valuation is additive on unit-content inputs") {
  std::mt19937_64 rng(9);
  ResidueRing R(3, 8);
  for (int t = 0; t < 200; ++t) {
    auto rnd = [&](int deg) {
      std::vector<u64> c(deg + 1);
      for (auto& x : c) x = rng() % R.modulus();
      c.back() = 1;
      return UniPoly(R, c);
    };
    int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3);
    u64 pa = ipow(3, a), pb = ipow(3, b);
    UniPoly f = rnd(3) * UniPoly(R, {pa});
    UniPoly g = rnd(2) * UniPoly(R, {pb});
    CHECK((f * g).gauss_val() == f.gauss_val() + g.gauss_val());
  }
}

TEST_CASE("unipoly monic division") {
  ResidueRing R(5, 4);
  UniPoly f(R, {R.from_int(-6), 1, 1});  // (T+3)(T-2)
  UniPoly g(R, {R.from_int(-2), 1});
  UniPoly q, r;
  f.divrem(g, &q, &r);
  CHECK(r.is_zero());
  CHECK(q == UniPoly(R, {3, 1}));
  CHECK(q * g == f);
}
