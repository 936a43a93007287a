#pragma once

#include "hfrob/precision.hpp"
#include "hfrob/reduction.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hfrob {

// Delta^0..Delta^jmax over Z/p^w, shared by all columns.
class DeltaPowers {
 public:
  DeltaPowers(const HypersurfaceSpec& spec, int w, int jmax);
  const std::shared_ptr<const ModPoly>& operator[](int j) const { return pw_.at(j); }
  int size() const { return static_cast<int>(pw_.size()); }

 private:
  std::vector<std::shared_ptr<const ModPoly>> pw_;
};

// One series term p^(n-1+j) binom(-h, j) mu(x^p) (x0...xn)^(p-1) Delta^j / P^(p(h+j)).
// The common p^(n-1) is left out of the scalar.
struct FrobTerm {
  int j = 0;
  PoleTerm term;  // p_shift = j + v_p(binom), unit = unit part of binom
  int degree() const { return term.numerator->degree() + term.multiplier.degree(); }
};

std::vector<FrobTerm> frobenius_image(const HypersurfaceSpec& spec, const BasisElement& b, int jmax,
                                      const DeltaPowers& delta, const ResidueRing& ring);

// Frobenius matrix M = p^-1 F on primitive middle cohomology, known to
// absolute precision p^r. When p < n the monomial basis need not span the
// integral lattice and M can have denominators; entries then hold the
// integral matrix p^shift M modulo p^(r + shift).
struct FrobMatrix {
  u64 p = 2;
  int n = 0;
  int r = 0;
  int shift = 0;
  std::size_t D = 0;
  std::vector<u64> entries;  // row-major, in [0, p^(r + shift))
  std::vector<BasisElement> labels;
  bool heuristic = false;
  int s = 0;       // truncation parameter used (j_max = s - n)
  int w = 0;       // modulus exponent of the reduction
  int certified = 0;  // least certified absolute precision before truncation to r
  std::string lift;

  u64 at(std::size_t i, std::size_t j) const { return entries[i * D + j]; }
  u64& at(std::size_t i, std::size_t j) { return entries[i * D + j]; }
  ResidueRing ring() const { return ResidueRing(p, r + shift); }
};

struct AssembleOptions {
  int workers = 1;
  // prescreen: truncate at this s instead of the planned one; output is heuristic
  int s_override = 0;
};

struct FrobeniusSetup {
  PrecisionPlan plan;
  int jmax = 0;
  int w = 0;
  int top_pole = 0;
  bool heuristic = false;
};

// Truncation and modulus for target r, honouring a prescreen override.
FrobeniusSetup plan_frobenius(const HypersurfaceSpec& spec, const CohomologyBasis& basis, int r,
                              const AssembleOptions& opt = {});

// tables must have been built at modulus exponent setup.w
FrobMatrix assemble_matrix(const HypersurfaceSpec& spec, const CohomologyBasis& basis,
                           const FrobeniusSetup& setup, const ReductionTables& tables,
                           const AssembleOptions& opt = {});

// rank of p^shift M mod p
int rank_mod_p(const FrobMatrix& m);
u64 trace_mod(const FrobMatrix& m);

void write_matrix(std::ostream& os, const FrobMatrix& m, const std::vector<std::string>& names = {});
FrobMatrix read_matrix(std::istream& is);

}  // namespace hfrob
