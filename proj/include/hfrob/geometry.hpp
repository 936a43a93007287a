#pragma once

#include "hfrob/hpoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hfrob {

struct HypersurfaceSpec {
  u64 p = 0;
  int n = 0;  // ambient projective dimension
  int d = 0;
  ModPoly P;   // over F_p
  ZPoly lift;  // integer lift of P
  bool explicit_lift = false;
  std::vector<std::string> var_names;

  int nvars() const { return n + 1; }
};

// Builds a spec from polynomial text. Without an explicit lift the
// coefficients are lifted to {0, ..., p-1}.
HypersurfaceSpec make_spec(u64 p, int n, std::string_view polynomial,
                           std::optional<std::string_view> lift = std::nullopt,
                           const std::vector<std::string>& var_names = {});

struct ProblemFile {
  HypersurfaceSpec spec;
  std::optional<int> precision;
  std::optional<int> prescreen;
  std::optional<std::string> mode;
  std::optional<int> imax;
  std::string source_text;
};

// JSON problem: {"p":3,"n":3,"polynomial":"...","lift":"...","variables":[...],
// "precision":2,"prescreen":8,"mode":"full","imax":3}
ProblemFile parse_and_lift(std::string_view json_text);

struct SmoothnessResult {
  bool smooth = false;
  int witness_degree = 0;
  long quotient_dim = 0;
};

// graded piece of F_p[x]/(dP, P) in degree (n+1)(d-2)+1
SmoothnessResult check_smooth(const HypersurfaceSpec& spec);
int socle_degree(int n, int d);  // (n+1)(d-2)+1

struct BasisElement {
  int pole = 0;
  Monomial mono;
};

class CohomologyBasis {
 public:
  CohomologyBasis() = default;
  explicit CohomologyBasis(std::vector<BasisElement> elems);

  const std::vector<BasisElement>& elements() const { return elems_; }
  std::size_t dimension() const { return elems_.size(); }
  const BasisElement& operator[](std::size_t k) const { return elems_[k]; }
  // -1 when absent
  int index_of(int pole, const Monomial& m) const;
  int max_pole() const;

 private:
  std::vector<BasisElement> elems_;
};

struct HodgeProfile {
  std::vector<int> counts;  // counts[h-1]
  int total() const;
};

long expected_primitive_dimension(int n, int d);

// basis by pole order h = 1..n; within h, grevlex descending
std::pair<CohomologyBasis, HodgeProfile> build_basis(const HypersurfaceSpec& spec);

}  // namespace hfrob
