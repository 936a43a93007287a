#pragma once

#include "hfrob/frobenius.hpp"
#include "hfrob/geometry.hpp"

#include <cstdint>
#include <vector>

namespace hfrob {

// F_{p^i} built from the lexicographically first monic irreducible polynomial
// of degree i. Elements are encoded by their coefficient vectors read as
// base-p integers in [0, q); multiplication and addition go through discrete
// logarithm and Zech tables.
class FieldExt {
 public:
  FieldExt(u64 p, int degree);

  u64 prime() const { return p_; }
  int degree() const { return i_; }
  u64 order() const { return q_; }
  // defining polynomial, ascending, monic
  const std::vector<u64>& modulus() const { return f_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, u64 e) const;
  // image of an element of F_p
  std::uint32_t embed(u64 c) const { return static_cast<std::uint32_t>(c % p_); }
  std::uint32_t generator() const { return exp_[1]; }

  // discrete log of a nonzero element; exp of any exponent
  std::uint32_t log(std::uint32_t a) const { return log_[a]; }
  std::uint32_t exp(u64 k) const { return exp_[k % (q_ - 1)]; }
  // zech(k) = log(1 + g^k), or kZero
  std::uint32_t zech(std::uint32_t k) const { return zech_[k]; }
  static constexpr std::uint32_t kZero = UINT32_MAX;

 private:
  u64 p_;
  int i_;
  u64 q_;
  std::vector<u64> f_;
  std::vector<std::uint32_t> log_, exp_, zech_;
};

// monic irreducible polynomials over F_p
bool is_irreducible(const std::vector<u64>& f, u64 p);
std::vector<u64> first_irreducible(u64 p, int degree);

struct CountOptions {
  int workers = 1;
  // largest allowed number of affine candidates p^(i n)
  u64 cap = u64(1) << 32;
};

// #Z(F_{p^i}) for Z = V(P) in P^n; throws CapExceeded
u64 count_points(const HypersurfaceSpec& spec, int i, const CountOptions& opt = {});

struct TraceVerdict {
  int i = 0;
  u64 count = 0;
  u64 predicted = 0;  // predicted count mod p^precision
  int precision = 0;  // r, less i shift - shift for a matrix with denominators
  bool ok = false;
};

// #X(F_{p^i}) = sum_{k<n} p^{ik} + (-1)^(n-1) Tr(M^i), checked mod p^precision for counts[i-1]
std::vector<TraceVerdict> trace_consistency(const FrobMatrix& M, const std::vector<u64>& counts);

// Characteristic polynomial of Frobenius on H^1 of a smooth plane curve of
// genus g (ascending, degree 2g), from counts over F_p..F_{p^g}, via Newton's
// identities and the functional equation.
std::vector<BigInt> curve_charpoly_from_counts(u64 p, int genus, const std::vector<u64>& counts);

}  // namespace hfrob
