#pragma once

#include "hfrob/frobenius.hpp"
#include "hfrob/residue.hpp"

#include <string>
#include <vector>

namespace hfrob {

// Dense matrix over Z/p^m.
struct ResidueMatrix {
  ResidueRing ring;
  std::size_t rows = 0, cols = 0;
  std::vector<u64> a;  // row-major

  ResidueMatrix() = default;
  ResidueMatrix(ResidueRing R, std::size_t r, std::size_t c) : ring(R), rows(r), cols(c), a(r * c, 0) {}
  u64& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  u64 operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
  static ResidueMatrix identity(ResidueRing R, std::size_t n);
};

ResidueMatrix to_residue_matrix(const FrobMatrix& m);
ResidueMatrix operator*(const ResidueMatrix& x, const ResidueMatrix& y);
// A - c*I
ResidueMatrix minus_scalar(const ResidueMatrix& A, u64 c);

// Upper bound on the corank over Q_p of any lift of A: repeated pivoting on
// an entry of least valuation (first in row-major order among ties).
int corank_upper_bound(const ResidueMatrix& A);

struct DetApprox {
  ScaledResidue value;   // signed pivot product
  int error_valuation;   // v_p(det(A) - value) >= this
};
// requires corank_upper_bound(A) == 0; throws std::domain_error otherwise
DetApprox det_product_approx(const ResidueMatrix& A);

// det(T I - A) by Berkowitz's division-free recursion; ascending coefficients
UniPoly charpoly_mod(const ResidueMatrix& A);

u64 euler_phi(u64 n);
// all n with phi(n) <= B, ascending
std::vector<int> enumerate_cyclotomic_levels(int B);
// n-th cyclotomic polynomial over Z, ascending coefficients
std::vector<BigInt> cyclotomic_poly(int n);
// p^(e phi(n)) Phi_n(T/p^e) reduced into R
UniPoly scaled_cyclotomic(int n, const ResidueRing& R, int e = 1);
// largest k with (p^(e phi) Phi_n(T/p^e))^k dividing C in (Z/p^r)[T]
int cyclotomic_multiplicity_bound(const UniPoly& C, int n, int e = 1);

// exponents of the elementary divisors of A that are determined at its
// precision (pivot valuations, ascending); *unresolved counts the rest
std::vector<int> elementary_divisor_exponents(const ResidueMatrix& A, int* unresolved = nullptr);

// The characteristic polynomial of p^-w M rescaled to an integral polynomial
// P~(U) = p^a p^(-wD) C(p^w U), whose roots are the unit eigenvalues. The
// precision of each coefficient follows from the elementary divisors of M, and
// the low half is recovered from the functional equation U^D Q(1/U) = Q(0) Q(U).
// One candidate per sign of Q(0) that is consistent with the computed data.
struct NormalizedCharpoly {
  bool available = false;
  std::string reason;        // why it is unavailable
  int weight_shift = 1;      // w
  std::vector<int> elementary;
  int content_shift = 0;     // a
  int precision = 0;         // every coefficient of each candidate is known mod p^precision
  std::vector<int> signs;    // Q(0) for each candidate
  std::vector<UniPoly> candidates;
};
NormalizedCharpoly normalized_charpoly(const ResidueMatrix& M, int weight_shift = 1);
// largest k with Phi_n^k dividing some candidate mod p^precision; -1 if unavailable
int normalized_multiplicity_bound(const NormalizedCharpoly& q, int n);

struct LevelBound {
  int n = 0;
  int phi = 0;
  int bound = 0;       // multiplicity bound of zeta_n p (least of the two tests)
  int integral_bound = 0;     // from C mod p^r and p^phi Phi_n(T/p)
  int normalized_bound = -1;  // from the rescaled polynomial, -1 if unavailable
  int corank = -1;     // corank bound of M -/+ p (n = 1, 2 only)
  std::string method;  // "corank" or "multiplicity": the one used in the mixed bound
};

struct TateBoundReport {
  int arithmetic = 0;
  int geometric = 0;
  int mixed_bound = 0;     // 1 + corank(M-p) + corank(M+p) + sum_{n>=3} phi(n) mult_n
  int ord_bound_raw = 0;   // 1 + sum_n phi(n) mult_n
  int ord_bound = 0;       // after the parity adjustment
  bool parity_adjusted = false;
  int b2 = 0;
  int precision = 0;
  bool heuristic = false;
  std::vector<LevelBound> levels;  // levels with a nonzero bound, plus n = 1, 2
  int normalized_precision = 0;    // 0 when the rescaled test was unavailable
  std::string normalized_note;
};

// Both bounds work with the stored integral matrix p^shift M, whose
// eigenvalues of interest are zeta_n p^(1 + shift).
int arithmetic_picard_bound(const FrobMatrix& M);
TateBoundReport geometric_picard_bound(const FrobMatrix& M);

}  // namespace hfrob
