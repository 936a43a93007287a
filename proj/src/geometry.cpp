#include "hfrob/geometry.hpp"

#include "hfrob/errors.hpp"
#include "hfrob/linalg_fp.hpp"

#include <json.hpp>

#include <unordered_map>

namespace hfrob {

HypersurfaceSpec make_spec(u64 p, int n, std::string_view polynomial,
                           std::optional<std::string_view> lift,
                           const std::vector<std::string>& var_names) {
  if (!is_prime(p)) throw InputError("p not prime");
  if (n < 2 || n + 1 > kMaxVars) throw InputError("n must be between 2 and " + std::to_string(kMaxVars - 1));
  if (!var_names.empty() && static_cast<int>(var_names.size()) != n + 1)
    throw InputError("variable list must have n+1 names");
  HypersurfaceSpec s;
  s.p = p;
  s.n = n;
  s.var_names = var_names;
  ZPoly f;
  try {
    f = parse_polynomial(polynomial, n + 1, var_names);
  } catch (const ParseError& e) {
    throw InputError(e.what());
  }
  ResidueRing Fp(p, 1);
  s.P = reduce_mod(f, Fp);
  if (s.P.is_zero()) throw InputError("polynomial vanishes mod p");
  s.d = s.P.degree();
  if (s.d < 2) throw InputError("degree must be at least 2");
  if (lift) {
    try {
      s.lift = parse_polynomial(*lift, n + 1, var_names);
    } catch (const ParseError& e) {
      throw InputError(std::string("lift: ") + e.what());
    }
    if (s.lift.degree() != s.d) throw InputError("lift degree differs from the polynomial degree");
    if (!(reduce_mod(s.lift, Fp) == s.P)) throw InputError("lift does not reduce to the polynomial mod p");
    s.explicit_lift = true;
  } else {
    s.lift = lift_to_integers(s.P);
  }
  return s;
}

ProblemFile parse_and_lift(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw InputError(std::string("problem file lacks field '") + key + "'");
    return j.at(key);
  };
  ProblemFile pf;
  try {
    u64 p = need("p").get<u64>();
    int n = need("n").get<int>();
    std::string poly = need("polynomial").get<std::string>();
    std::vector<std::string> names;
    if (j.contains("variables")) names = j.at("variables").get<std::vector<std::string>>();
    std::optional<std::string> lift;
    if (j.contains("lift") && !j.at("lift").is_null()) lift = j.at("lift").get<std::string>();
    std::optional<std::string_view> lv;
    if (lift) lv = *lift;
    pf.spec = make_spec(p, n, poly, lv, names);
    if (j.contains("precision")) pf.precision = j.at("precision").get<int>();
    if (j.contains("prescreen")) pf.prescreen = j.at("prescreen").get<int>();
    if (j.contains("mode")) pf.mode = j.at("mode").get<std::string>();
    if (j.contains("imax")) pf.imax = j.at("imax").get<int>();
    if (j.contains("degree") && j.at("degree").get<int>() != pf.spec.d)
      throw InputError("declared degree does not match the polynomial");
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("problem file: ") + e.what());
  }
  if (pf.precision && *pf.precision < 1) throw InputError("precision must be positive");
  pf.source_text = std::string(json_text);
  return pf;
}

int socle_degree(int n, int d) { return (n + 1) * (d - 2) + 1; }

namespace {

// echelon form of the degree-e part of (dP_0..dP_n, P) over F_p
FpEchelon jacobian_span(const HypersurfaceSpec& s, int e, const std::vector<Monomial>& cols) {
  std::unordered_map<Monomial, std::size_t, MonomialHash> index;
  for (std::size_t k = 0; k < cols.size(); ++k) index.emplace(cols[k], k);
  FpEchelon ech(s.p, cols.size());
  std::vector<ModPoly> gens;
  for (int i = 0; i <= s.n; ++i) gens.push_back(partial(s.P, i));
  gens.push_back(s.P);
  for (const ModPoly& g : gens) {
    int k = e - g.degree();
    if (k < 0 || g.is_zero()) continue;
    for (const Monomial& m : monomials_of_degree(s.nvars(), k)) {
      std::vector<u64> row(cols.size(), 0);
      for (const auto& [t, c] : g.terms()) row[index.at(t * m)] = c;
      ech.insert(std::move(row));
      if (ech.rank() == cols.size()) return ech;
    }
  }
  return ech;
}

}  // namespace

SmoothnessResult check_smooth(const HypersurfaceSpec& spec) {
  int e = socle_degree(spec.n, spec.d);
  auto cols = monomials_of_degree(spec.nvars(), e);
  FpEchelon ech = jacobian_span(spec, e, cols);
  SmoothnessResult r;
  r.witness_degree = e;
  r.quotient_dim = static_cast<long>(cols.size() - ech.rank());
  r.smooth = r.quotient_dim == 0;
  return r;
}

CohomologyBasis::CohomologyBasis(std::vector<BasisElement> elems) : elems_(std::move(elems)) {}

int CohomologyBasis::index_of(int pole, const Monomial& m) const {
  for (std::size_t k = 0; k < elems_.size(); ++k)
    if (elems_[k].pole == pole && elems_[k].mono == m) return static_cast<int>(k);
  return -1;
}

int CohomologyBasis::max_pole() const {
  int h = 0;
  for (const auto& b : elems_) h = std::max(h, b.pole);
  return h;
}

int HodgeProfile::total() const {
  int t = 0;
  for (int c : counts) t += c;
  return t;
}

long expected_primitive_dimension(int n, int d) {
  long a = 1;
  for (int i = 0; i <= n; ++i) a *= (d - 1);
  long sign = (n + 1) % 2 == 0 ? 1 : -1;
  return (a + sign * (d - 1)) / d;
}

std::pair<CohomologyBasis, HodgeProfile> build_basis(const HypersurfaceSpec& spec) {
  std::vector<BasisElement> elems;
  HodgeProfile prof;
  for (int h = 1; h <= spec.n; ++h) {
    int e = h * spec.d - spec.n - 1;
    int count = 0;
    if (e >= 0) {
      auto cols = monomials_of_degree(spec.nvars(), e);
      FpEchelon ech = jacobian_span(spec, e, cols);
      for (std::size_t c : ech.non_pivots()) {
        elems.push_back({h, cols[c]});
        ++count;
      }
    }
    prof.counts.push_back(count);
  }
  long want = expected_primitive_dimension(spec.n, spec.d);
  if (static_cast<long>(elems.size()) != want)
    throw InputError("Jacobian quotient mod p has dimension " + std::to_string(elems.size()) +
                     ", expected " + std::to_string(want) +
                     (spec.d % static_cast<int>(spec.p) == 0 ? " (p divides the degree)" : ""));
  return {CohomologyBasis(std::move(elems)), prof};
}

}  // namespace hfrob
