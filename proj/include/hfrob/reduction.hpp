#pragma once

#include "hfrob/geometry.hpp"
#include "hfrob/groebner.hpp"

#include <map>
#include <memory>
#include <unordered_map>
#include <vector>

namespace hfrob {

// One instance of gamma = sum_i a_i dP_i + c P + R for a monomial gamma.
struct Identity {
  std::vector<ModPoly> a;   // cofactors of dP_0..dP_n
  ModPoly c;                // cofactor of P
  ModPoly next;             // sum_i d_i a_i, plus (m-1) c below the socle degree
  std::vector<u64> coords;  // R in basis coordinates (below the socle degree only)
};

// Reduction identities for every monomial that can occur in a numerator.
// At degrees >= (n+1)(d-2)+1 the Jacobian quotient vanishes and a single
// table of identities for that degree covers all higher degrees by
// multiplying through by monomials. Lower degrees get one table per pole.
class ReductionTables {
 public:
  enum class Method { groebner, linear };

  // gb may be null, in which case every table is built by linear algebra
  ReductionTables(const HypersurfaceSpec& spec, const CohomologyBasis& basis, int w,
                  const StrongGB* gb);

  const HypersurfaceSpec& spec() const { return spec_; }
  const CohomologyBasis& basis() const { return basis_; }
  const ResidueRing& ring() const { return ring_; }
  int socle() const { return e0_; }
  int degree_at(int pole) const { return pole * spec_.d - spec_.n - 1; }
  bool is_high(int pole) const { return degree_at(pole) >= e0_; }

  const std::vector<Monomial>& high_monomials() const { return high_monos_; }
  const std::vector<Identity>& high() const { return high_; }
  const Identity& high(const Monomial& beta) const { return high_.at(high_index_.at(beta)); }

  const std::vector<Monomial>& low_monomials(int pole) const { return low_.at(pole).monos; }
  const std::vector<Identity>& low(int pole) const { return low_.at(pole).ids; }
  const Identity& low(int pole, const Monomial& gamma) const;

  // how each table was produced; keyed by degree
  const std::map<int, Method>& methods() const { return methods_; }

 private:
  struct LowTable {
    std::vector<Monomial> monos;
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
    std::vector<Identity> ids;
  };

  std::vector<Identity> build_degree(int degree, int pole, const StrongGB* gb);

  HypersurfaceSpec spec_;
  CohomologyBasis basis_;
  ResidueRing ring_;
  int e0_ = 0;
  std::vector<ModPoly> gens_;
  std::vector<Monomial> high_monos_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> high_index_;
  std::vector<Identity> high_;
  std::map<int, LowTable> low_;
  std::map<int, Method> methods_;
};

// Identities for all monomials of a degree by inverting a square system of
// generator multiples (and basis monomials of the given pole) over Z/p^w.
std::vector<Identity> linear_identities(const HypersurfaceSpec& spec, const CohomologyBasis& basis,
                                        const ResidueRing& ring, int degree, int pole);

// The class numerator / (ledger * P^pole).
struct ReductionState {
  int pole = 1;
  ModPoly numerator;
  BigInt ledger = 1;
};

struct StepResult {
  ReductionState state;
  std::vector<u64> captured;  // to be divided by the ledger of the input state
};

// One descent step m -> m-1 (m >= 2) for a sparse numerator.
StepResult reduce_pole_step(const ReductionState& st, const ReductionTables& tables);
// Basis coordinates of a numerator at pole 1 (to be divided by the ledger).
std::vector<u64> capture_pole_one(const ReductionState& st, const ReductionTables& tables);

// p^p_shift * unit * multiplier * numerator / P^pole
struct PoleTerm {
  int pole = 1;
  std::shared_ptr<const ModPoly> numerator;
  Monomial multiplier;
  int p_shift = 0;
  u64 unit = 1;
};

struct ReducedClass {
  std::vector<ScaledResidue> coords;
  int certified = 0;  // least absolute precision over the coordinates
  int top_pole = 0;
};

// Basis coordinates of p^scale_shift * (sum of terms), reduced with dense
// exponent-box buffers. Divisions by pole orders are deferred to the end.
ReducedClass reduce_to_basis(const std::vector<PoleTerm>& terms, const ReductionTables& tables,
                             int scale_shift = 0);

// the same through repeated reduce_pole_step calls (slow reference path)
ReducedClass reduce_to_basis_sparse(const std::vector<PoleTerm>& terms, const ReductionTables& tables,
                                    int scale_shift = 0);

// bytes of dense workspace needed to reduce from the given pole
double reduction_workspace_bytes(int n, int d, int top_pole);

}  // namespace hfrob
