#pragma once

#include "hfrob/geometry.hpp"
#include "hfrob/hpoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hfrob {

struct GBElement {
  ModPoly poly;                    // leading coefficient is a power of p
  std::vector<ModPoly> cofactors;  // poly = sum cofactors[k] * generators[k]
  int lc_valuation = 0;
};

// Strong Groebner basis of a homogeneous ideal over Z/p^s under grevlex,
// complete up to a degree bound.
class StrongGB {
 public:
  StrongGB() = default;
  StrongGB(ResidueRing ring, std::vector<ModPoly> generators, int max_degree);

  const ResidueRing& ring() const { return ring_; }
  int nvars() const { return nvars_; }
  int max_degree() const { return max_degree_; }
  const std::vector<ModPoly>& generators() const { return gens_; }
  const std::vector<GBElement>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }

  struct Step {
    int element;
    Monomial shift;
    u64 coeff;
  };
  // top-reduces f completely; returns remainder and the reduction steps
  ModPoly reduce(const ModPoly& f, std::vector<Step>* steps = nullptr) const;
  // sum_k coeff * shift * cofactors(element)
  std::vector<ModPoly> cofactors_of(const std::vector<Step>& steps, int degree) const;

  // used by the cache loader
  static StrongGB from_parts(ResidueRing ring, std::vector<ModPoly> generators, int max_degree,
                             std::vector<GBElement> elems);

 private:
  void build();
  int find_reducer(const Monomial& m, int v) const;
  void add_element(ModPoly f, std::vector<ModPoly> cof);

  ResidueRing ring_;
  int nvars_ = 0;
  int max_degree_ = 0;
  std::vector<ModPoly> gens_;
  std::vector<GBElement> elems_;
};

ModPoly s_polynomial(const GBElement& a, const GBElement& b, const ResidueRing& ring);
// p^(s-a) * g for a leading coefficient of valuation a > 0
ModPoly annihilator(const GBElement& g, const ResidueRing& ring);

// generators dP_0..dP_n and P over Z/p^s
std::vector<ModPoly> jacobian_generators(const HypersurfaceSpec& spec, const ResidueRing& ring,
                                         bool include_P = true);
StrongGB strong_groebner(const HypersurfaceSpec& spec, int s, int max_degree = -1);

struct Division {
  std::vector<ModPoly> cofactors;  // one per generator
  ModPoly remainder;
};
Division divide_with_cofactors(const ModPoly& g, const StrongGB& gb);

// cache: text format keyed by a content hash
std::string gb_cache_key(const HypersurfaceSpec& spec, int s, int max_degree);
void save_gb(const std::string& path, const StrongGB& gb, const std::string& key);
std::optional<StrongGB> load_gb(const std::string& path, const std::string& key);

u64 fnv1a(std::string_view data);

}  // namespace hfrob
