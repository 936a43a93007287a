#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../common/surfaces.hpp"
#include "hfrob/errors.hpp"
#include "hfrob/frobenius.hpp"
#include "hfrob/spectral.hpp"
#include "hfrob/zeta.hpp"

#include <random>
#include <sstream>

using namespace hfrob;
using namespace hfrob::testing;

namespace {

BigInt binom_neg(int h, int j) {
  // binom(-h, j) = (-1)^j binom(h + j - 1, j)
  BigInt b = 1;
  for (int k = 1; k <= j; ++k) b = b * (h + j - k) / k;
  return j % 2 ? BigInt(-b) : b;
}

}  // namespace

TEST_CASE("Frobenius image terms") {
  auto spec = quartic_f3();
  auto basis = build_basis(spec).first;
  FrobeniusSetup setup = plan_frobenius(spec, basis, 2);
  CHECK(setup.plan.s == 6);
  CHECK(setup.jmax == 3);
  DeltaPowers delta(spec, setup.w, setup.jmax);
  ResidueRing R(3, setup.w);
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const BasisElement& b = basis[k];
    auto terms = frobenius_image(spec, b, setup.jmax, delta, R);
    REQUIRE(terms.size() == 4);
    for (const FrobTerm& t : terms) {
      CHECK(t.term.pole == 3 * (b.pole + t.j));
      CHECK(t.degree() == 3 * (b.pole + t.j) * 4 - 4);
      BigInt bn = binom_neg(b.pole, t.j);
      CHECK(t.term.p_shift == t.j + vp(bn, 3));
      BigInt u = bn;
      for (int i = 0; i < vp(bn, 3); ++i) u /= 3;
      CHECK(t.term.unit == R.from_big(u));
    }
    CHECK(terms[0].term.numerator->size() == 1);
  }
}

TEST_CASE("F3 quartic at r = 2") {
  auto spec = quartic_f3();
  FrobMatrix M = compute_matrix(spec, 2);
  CHECK(M.D == 21);
  CHECK(M.shift == 0);
  CHECK(M.certified >= 2);
  CHECK(trace_mod(M) == ResidueRing(3, 2).from_int(-5));
  CHECK(rank_mod_p(M) <= 1);

  SUBCASE("coherence with r = 3") {
    FrobMatrix M3 = compute_matrix(spec, 3);
    for (std::size_t i = 0; i < M.entries.size(); ++i) CHECK(M3.entries[i] % 9 == M.entries[i]);
    CHECK(trace_mod(M3) == ResidueRing(3, 3).from_int(-5));
  }
  SUBCASE("serialization round trip") {
    std::stringstream ss;
    write_matrix(ss, M, kXYZW);
    FrobMatrix back = read_matrix(ss);
    CHECK(back.entries == M.entries);
    CHECK(back.D == M.D);
    CHECK(back.s == M.s);
    CHECK(back.labels.size() == M.labels.size());
    for (std::size_t k = 0; k < M.D; ++k) {
      CHECK(back.labels[k].pole == M.labels[k].pole);
      CHECK(back.labels[k].mono == M.labels[k].mono);
    }
  }
  SUBCASE("prescreen is stamped heuristic") {
    AssembleOptions opt;
    opt.s_override = 5;
    FrobMatrix H = compute_matrix(spec, 2, opt);
    CHECK(H.heuristic);
    CHECK(H.s == 5);
  }
}

TEST_CASE("plane cubics satisfy the trace formula and the count oracle") {
  std::mt19937_64 rng(42);
  for (u64 p : {5, 7}) {
    auto spec = random_smooth(rng, p, 2, 3);
    FrobMatrix M = compute_matrix(spec, 2);
    REQUIRE(M.D == 2);
    std::vector<u64> counts{count_points(spec, 1), count_points(spec, 2)};
    for (const auto& v : trace_consistency(M, counts)) CHECK(v.ok);
    auto expect = curve_charpoly_from_counts(p, 1, counts);
    UniPoly C = charpoly_mod(to_residue_matrix(M));
    for (int k = 0; k <= 2; ++k) CHECK(C.coeff(k) == M.ring().from_big(expect[k]));
  }
}

TEST_CASE("plane quartic curve over F_5") {
  std::mt19937_64 rng(8);
  auto spec = random_smooth(rng, 5, 2, 4);
  FrobMatrix M = compute_matrix(spec, 2);
  REQUIRE(M.D == 6);
  std::vector<u64> counts;
  for (int i = 1; i <= 3; ++i) counts.push_back(count_points(spec, i));
  for (const auto& v : trace_consistency(M, counts)) CHECK(v.ok);
  auto expect = curve_charpoly_from_counts(5, 3, counts);
  UniPoly C = charpoly_mod(to_residue_matrix(M));
  for (int k = 0; k <= 6; ++k) CHECK(C.coeff(k) == M.ring().from_big(expect[k]));
}

TEST_CASE("precision exhaustion is reported") {
  auto spec = quartic_f3();
  auto basis = build_basis(spec).first;
  FrobeniusSetup setup = plan_frobenius(spec, basis, 2);
  // tables at a lower modulus cannot certify two digits
  setup.w = 3;
  StrongGB gb = strong_groebner(spec, setup.w);
  ReductionTables tables(spec, basis, setup.w, &gb);
  CHECK_THROWS_AS(assemble_matrix(spec, basis, setup, tables), PrecisionExhausted);
}
