#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hfrob {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

class NotInvertible : public std::domain_error {
 public:
  NotInvertible() : std::domain_error("not invertible at this precision") {}
};

bool is_prime(u64 n);
// p^e, throws std::overflow_error past 2^63
u64 ipow(u64 p, int e);
// largest e with p^e <= x, x >= 1
int ilog(u64 x, u64 p);
int ilog(const BigInt& x, u64 p);
int vp(i64 x, u64 p);  // x != 0
int vp(const BigInt& x, u64 p);
// v_p(k!) by Legendre
int vp_factorial(i64 k, u64 p);

// Coefficient ring Z/p^m with machine-word residues. Also the coefficient
// policy for HPoly over residues.
class ResidueRing {
 public:
  using Elem = u64;

  ResidueRing() = default;
  ResidueRing(u64 p, int m);

  u64 prime() const { return p_; }
  int precision() const { return m_; }
  u64 modulus() const { return mod_; }

  u64 zero() const { return 0; }
  u64 one() const { return mod_ == 1 ? 0 : 1; }
  u64 from_int(i64 x) const;
  u64 from_big(const BigInt& x) const;
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= mod_ ? s - mod_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + mod_ - b; }
  u64 neg(u64 a) const { return a == 0 ? 0 : mod_ - a; }
  u64 mul(u64 a, u64 b) const {
    if (small_) return (a * b) % mod_;
    return static_cast<u64>(static_cast<u128>(a) * b % mod_);
  }
  u64 pow(u64 a, u64 e) const;
  bool is_zero(u64 a) const { return a == 0; }

  // returns m for zero
  int valuation(u64 a) const;
  // a = p^v * u with u a unit mod p^(m-v); returns u reduced mod p^m
  u64 unit_part(u64 a, int* v) const;
  std::optional<u64> inverse(u64 a) const;
  u64 inverse_or_throw(u64 a) const;
  // exact division by p^k of a value known to be divisible
  u64 shift_down(u64 a, int k) const;
  // symmetric representative in (-mod/2, mod/2]
  i64 centered(u64 a) const;
  BigInt lift(u64 a) const { return BigInt(a); }
  ResidueRing truncated(int m) const { return ResidueRing(p_, m); }

  bool small_modulus() const { return small_; }
  friend bool operator==(const ResidueRing& a, const ResidueRing& b) {
    return a.p_ == b.p_ && a.m_ == b.m_;
  }

 private:
  u64 p_ = 2;
  int m_ = 1;
  u64 mod_ = 2;
  bool small_ = true;
};

// Element of Z/p^m.
class PResidue {
 public:
  PResidue(u64 p, int m, i64 value);
  PResidue(const ResidueRing& ring, u64 value) : ring_(ring), value_(value % ring.modulus()) {}

  u64 value() const { return value_; }
  u64 prime() const { return ring_.prime(); }
  int precision() const { return ring_.precision(); }
  const ResidueRing& ring() const { return ring_; }
  bool is_zero() const { return value_ == 0; }
  PResidue truncate(int m) const;

  friend PResidue operator+(const PResidue& a, const PResidue& b);
  friend PResidue operator-(const PResidue& a, const PResidue& b);
  friend PResidue operator*(const PResidue& a, const PResidue& b);
  PResidue operator-() const { return PResidue(ring_, ring_.neg(value_)); }
  friend bool operator==(const PResidue& a, const PResidue& b) {
    return a.ring_ == b.ring_ && a.value_ == b.value_;
  }

 private:
  ResidueRing ring_;
  u64 value_ = 0;
};

struct Valuation {
  int value = 0;
  bool saturated = false;  // value is only a lower bound (residue was zero)
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

Valuation val(const PResidue& a);
PResidue invert_unit(const PResidue& a);

// unit * p^shift, with the unit known modulo p^rel. A zero element stores
// only its absolute precision. Exact zeros have unbounded precision.
class ScaledResidue {
 public:
  static ScaledResidue exact_zero(u64 p);
  static ScaledResidue zero(u64 p, int abs_precision);
  // p^shift * value where value is known mod p^m
  static ScaledResidue from_residue(u64 p, u64 value, int m, int shift = 0);
  static ScaledResidue from_int(u64 p, const BigInt& value, int abs_precision);

  u64 prime() const { return p_; }
  u64 unit() const { return unit_; }
  int shift() const { return shift_; }
  int relative_precision() const { return rel_; }
  int absolute_precision() const { return shift_ + rel_; }
  bool is_exact_zero() const { return exact_zero_; }
  bool is_zero() const { return exact_zero_ || unit_ == 0; }
  bool indeterminate() const { return !exact_zero_ && rel_ <= 0; }
  // valuation, or a lower bound for zero elements
  int valuation() const { return shift_; }

  // residue mod p^r; requires absolute precision >= r and shift >= 0 unless zero
  u64 residue(int r) const;
  // exact rational p^shift * unit using the canonical unit representative
  boost::multiprecision::cpp_rational to_rational() const;

  friend ScaledResidue operator+(const ScaledResidue& a, const ScaledResidue& b);
  friend ScaledResidue operator-(const ScaledResidue& a, const ScaledResidue& b);
  friend ScaledResidue operator*(const ScaledResidue& a, const ScaledResidue& b);
  ScaledResidue operator-() const;
  ScaledResidue with_absolute_precision(int a) const;

 private:
  u64 p_ = 2;
  u64 unit_ = 0;
  int shift_ = 0;
  int rel_ = 0;
  bool exact_zero_ = false;
};

ScaledResidue divide_tracked(const ScaledResidue& a, const BigInt& b);
// divide by p^v * u where u is a unit residue mod p^(rel of a)
ScaledResidue divide_tracked(const ScaledResidue& a, int v, u64 unit);

// Univariate polynomial over Z/p^m, coefficient k multiplies T^k.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(ResidueRing ring, std::vector<u64> coeffs = {});

  const ResidueRing& ring() const { return ring_; }
  const std::vector<u64>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  u64 coeff(int k) const { return k >= 0 && k < static_cast<int>(c_.size()) ? c_[k] : 0; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == ring_.one(); }
  int gauss_val() const;

  friend UniPoly operator+(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator-(const UniPoly& a, const UniPoly& b);
  friend UniPoly operator*(const UniPoly& a, const UniPoly& b);
  friend bool operator==(const UniPoly& a, const UniPoly& b) {
    return a.ring_ == b.ring_ && a.c_ == b.c_;
  }
  // division by a monic polynomial
  void divrem(const UniPoly& monic, UniPoly* q, UniPoly* r) const;
  UniPoly pow(int e) const;

 private:
  void trim();
  ResidueRing ring_;
  std::vector<u64> c_;
};

}  // namespace hfrob
