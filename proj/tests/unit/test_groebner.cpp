#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../common/surfaces.hpp"
#include "hfrob/groebner.hpp"

#include <filesystem>
#include <random>

using namespace hfrob;
using namespace hfrob::testing;

namespace {

void check_closure(const StrongGB& gb) {
  const auto& E = gb.elements();
  for (std::size_t a = 0; a < E.size(); ++a) {
    if (E[a].lc_valuation > 0) CHECK(gb.reduce(annihilator(E[a], gb.ring())).is_zero());
    for (std::size_t b = 0; b < a; ++b) {
      Monomial L = E[a].poly.leading_monomial().lcm(E[b].poly.leading_monomial());
      if (L.degree() > gb.max_degree()) continue;
      CHECK(gb.reduce(s_polynomial(E[a], E[b], gb.ring())).is_zero());
    }
  }
}

void check_records(const StrongGB& gb) {
  for (const auto& e : gb.elements()) {
    ModPoly sum(gb.ring(), gb.nvars(), e.poly.degree());
    for (std::size_t k = 0; k < gb.generators().size(); ++k) sum += multiply(e.cofactors[k], gb.generators()[k]);
    CHECK(sum == e.poly);
    CHECK(e.poly.leading_coeff() == ipow(gb.ring().prime(), e.lc_valuation));
  }
}

ModPoly random_mod(std::mt19937_64& rng, const ResidueRing& R, int nvars, int deg) {
  ModPoly f(R, nvars, deg);
  for (const auto& m : monomials_of_degree(nvars, deg)) f.add_term(m, rng() % R.modulus());
  return f;
}

}  // namespace

TEST_CASE("quadric: partials are the variables up to units") {
  auto spec = make_spec(5, 3, "x0^2 + x1^2 + x2^2 + x3^2");
  StrongGB gb = strong_groebner(spec, 3);
  int linear = 0;
  for (const auto& e : gb.elements())
    if (e.poly.degree() == 1 && e.poly.size() == 1 && e.lc_valuation == 0) ++linear;
  CHECK(linear == 4);
  check_closure(gb);
  check_records(gb);
}

TEST_CASE("generators reduce to zero") {
  auto spec = quartic_f3();
  StrongGB gb = strong_groebner(spec, 4);
  for (const auto& g : gb.generators()) CHECK(gb.reduce(g).is_zero());
  check_closure(gb);
  check_records(gb);
}

TEST_CASE("P is needed when p divides d") {
  auto spec = make_spec(2, 3, kQuarticF2, std::nullopt, kXYZW);
  ResidueRing R(2, 4);
  int e0 = socle_degree(3, 4);
  StrongGB partials_only(R, jacobian_generators(spec, R, false), e0);
  ModPoly P = reduce_mod(spec.lift, R);
  CHECK_FALSE(partials_only.reduce(P).is_zero());
  StrongGB full(R, jacobian_generators(spec, R, true), e0);
  CHECK(full.reduce(P).is_zero());
  check_closure(full);
}

TEST_CASE("division with cofactors") {
  std::mt19937_64 rng(7);
  auto spec = quartic_f3();
  StrongGB gb = strong_groebner(spec, 6);
  const auto& gens = gb.generators();

  Division d0 = divide_with_cofactors(gens[0], gb);
  CHECK(d0.remainder.is_zero());

  for (int deg : {5, 8, 9, 12}) {
    ModPoly G = random_mod(rng, gb.ring(), 4, deg);
    Division d = divide_with_cofactors(G, gb);
    ModPoly sum = d.remainder;
    for (std::size_t k = 0; k < gens.size(); ++k) sum += multiply(d.cofactors[k], gens[k]);
    CHECK(sum == G);
    if (deg >= socle_degree(3, 4)) CHECK(d.remainder.is_zero());
  }

  auto [basis, prof] = build_basis(spec);
  for (const auto& b : basis.elements()) {
    ModPoly mu = ModPoly::monomial(gb.ring(), b.mono, 1);
    CHECK(gb.reduce(mu) == mu);
  }
}

TEST_CASE("cache round trip") {
  auto spec = make_spec(5, 3, "x0^3 + x1^3 + x2^3 + x3^3 + x0*x1*x2");
  StrongGB gb = strong_groebner(spec, 4);
  std::string key = gb_cache_key(spec, 4, gb.max_degree());
  auto path = (std::filesystem::temp_directory_path() / "hfrob_gb_test.txt").string();
  save_gb(path, gb, key);
  auto loaded = load_gb(path, key);
  REQUIRE(loaded.has_value());
  REQUIRE(loaded->size() == gb.size());
  for (std::size_t k = 0; k < gb.size(); ++k) CHECK(loaded->elements()[k].poly == gb.elements()[k].poly);
  CHECK_FALSE(load_gb(path, key + "x").has_value());
  CHECK(gb_cache_key(spec, 5, gb.max_degree()) != key);
  std::filesystem::remove(path);
}
