#pragma once

#include "hfrob/residue.hpp"

#include <array>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hfrob {

inline constexpr int kMaxVars = 8;

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(int nvars) : nvars_(static_cast<std::uint8_t>(nvars)) {
    if (nvars < 1 || nvars > kMaxVars) throw std::invalid_argument("bad variable count");
  }
  Monomial(std::initializer_list<int> exps);
  static Monomial from_vector(const std::vector<int>& exps);

  int nvars() const { return nvars_; }
  int degree() const { return deg_; }
  int operator[](int i) const { return e_[i]; }
  void set(int i, int e) {
    deg_ = static_cast<std::uint16_t>(deg_ - e_[i] + e);
    e_[i] = static_cast<std::uint16_t>(e);
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < nvars_; ++i)
      if (e_[i] > o.e_[i]) return false;
    return true;
  }
  Monomial operator*(const Monomial& o) const;
  Monomial operator/(const Monomial& o) const;  // requires divides
  Monomial lcm(const Monomial& o) const;
  Monomial scaled(int p) const;  // x^I -> x^{pI}
  std::vector<int> exponents() const { return {e_.begin(), e_.begin() + nvars_}; }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.nvars_ == b.nvars_ && a.e_ == b.e_;
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }
  std::size_t hash() const;

 private:
  std::array<std::uint16_t, kMaxVars> e_{};
  std::uint8_t nvars_ = 0;
  std::uint16_t deg_ = 0;
};

// graded reverse lexicographic: -1, 0, 1
int grevlex_compare(const Monomial& a, const Monomial& b);

struct GrevlexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return grevlex_compare(a, b) > 0; }
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

// all monomials of a degree, grevlex descending
std::vector<Monomial> monomials_of_degree(int nvars, int degree);
u64 count_monomials(int nvars, int degree);

// Exact integer coefficients.
struct IntegerRing {
  using Elem = BigInt;
  BigInt zero() const { return 0; }
  BigInt one() const { return 1; }
  BigInt from_int(i64 x) const { return x; }
  BigInt from_big(const BigInt& x) const { return x; }
  BigInt add(const BigInt& a, const BigInt& b) const { return a + b; }
  BigInt sub(const BigInt& a, const BigInt& b) const { return a - b; }
  BigInt neg(const BigInt& a) const { return -a; }
  BigInt mul(const BigInt& a, const BigInt& b) const { return a * b; }
  bool is_zero(const BigInt& a) const { return a == 0; }
  BigInt lift(const BigInt& a) const { return a; }
  friend bool operator==(const IntegerRing&, const IntegerRing&) { return true; }
};

template <class Ring>
class HPoly {
 public:
  using Elem = typename Ring::Elem;
  using TermMap = std::map<Monomial, Elem, GrevlexGreater>;

  HPoly() = default;
  HPoly(Ring ring, int nvars, int degree) : ring_(ring), nvars_(nvars), degree_(degree) {}

  static HPoly monomial(Ring ring, const Monomial& m, Elem c) {
    HPoly f(ring, m.nvars(), m.degree());
    f.add_term(m, c);
    return f;
  }

  const Ring& ring() const { return ring_; }
  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Elem coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? ring_.zero() : it->second;
  }
  const Monomial& leading_monomial() const { return terms_.begin()->first; }
  const Elem& leading_coeff() const { return terms_.begin()->second; }

  void add_term(const Monomial& m, const Elem& c) {
    if (m.nvars() != nvars_ || m.degree() != degree_) throw std::invalid_argument("not homogeneous");
    if (ring_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = ring_.add(it->second, c);
      if (ring_.is_zero(it->second)) terms_.erase(it);
    }
  }
  void set_term(const Monomial& m, const Elem& c) {
    terms_.erase(m);
    add_term(m, c);
  }

  HPoly& operator+=(const HPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  HPoly& operator-=(const HPoly& o) {
    check_compatible(o);
    for (const auto& [m, c] : o.terms_) add_term(m, ring_.neg(c));
    return *this;
  }
  friend HPoly operator+(HPoly a, const HPoly& b) { return a += b; }
  friend HPoly operator-(HPoly a, const HPoly& b) { return a -= b; }
  HPoly operator-() const { return scaled(ring_.neg(ring_.one())); }

  HPoly scaled(const Elem& c) const {
    HPoly r(ring_, nvars_, degree_);
    if (ring_.is_zero(c)) return r;
    for (const auto& [m, a] : terms_) r.add_term(m, ring_.mul(a, c));
    return r;
  }
  HPoly times_monomial(const Monomial& x, const Elem& c) const {
    HPoly r(ring_, nvars_, degree_ + x.degree());
    for (const auto& [m, a] : terms_) r.add_term(m * x, ring_.mul(a, c));
    return r;
  }
  friend HPoly operator*(const HPoly& a, const HPoly& b) {
    HPoly r(a.ring_, a.nvars_, a.degree_ + b.degree_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, a.ring_.mul(ca, cb));
    return r;
  }
  friend bool operator==(const HPoly& a, const HPoly& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void check_compatible(const HPoly& o) const {
    if (o.nvars_ != nvars_ || o.degree_ != degree_) throw std::invalid_argument("degree mismatch");
  }

  Ring ring_{};
  int nvars_ = 0;
  int degree_ = 0;
  TermMap terms_;
};

using ZPoly = HPoly<IntegerRing>;
using ModPoly = HPoly<ResidueRing>;

template <class Ring>
HPoly<Ring> partial(const HPoly<Ring>& f, int i) {
  if (f.degree() < 1) throw std::invalid_argument("partial of a constant");
  const Ring& R = f.ring();
  HPoly<Ring> r(R, f.nvars(), f.degree() - 1);
  for (const auto& [m, c] : f.terms()) {
    if (m[i] == 0) continue;
    Monomial q = m;
    q.set(i, m[i] - 1);
    r.add_term(q, R.mul(c, R.from_int(m[i])));
  }
  return r;
}

template <class Ring>
HPoly<Ring> frob_substitute(const HPoly<Ring>& f, int p) {
  HPoly<Ring> r(f.ring(), f.nvars(), f.degree() * p);
  for (const auto& [m, c] : f.terms()) r.add_term(m.scaled(p), c);
  return r;
}

template <class Ring>
HPoly<Ring> one_poly(const Ring& R, int nvars) {
  return HPoly<Ring>::monomial(R, Monomial(nvars), R.one());
}

template <class Ring>
HPoly<Ring> pow(const HPoly<Ring>& f, int e) {
  HPoly<Ring> r = one_poly(f.ring(), f.nvars());
  HPoly<Ring> b = f;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

template <class R2, class R1, class F>
HPoly<R2> map_coefficients(const HPoly<R1>& f, const R2& ring, F fn) {
  HPoly<R2> r(ring, f.nvars(), f.degree());
  for (const auto& [m, c] : f.terms()) r.add_term(m, fn(c));
  return r;
}

ModPoly reduce_mod(const ZPoly& f, const ResidueRing& ring);
ModPoly change_precision(const ModPoly& f, const ResidueRing& ring);
// integer lift using representatives in [0, p^m)
ZPoly lift_to_integers(const ModPoly& f);

// dense-accumulated product for residue polynomials with many terms
ModPoly multiply(const ModPoly& a, const ModPoly& b);

// (F(P) - P^p) / p over the integers
ZPoly compute_delta(const ZPoly& lift, u64 p);
// the same, reduced mod p^prec, computed with arithmetic mod p^(prec+1)
ModPoly compute_delta_mod(const ZPoly& lift, u64 p, int prec);

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Terms like "3*x0^2*x1 - x2^4"; names default to x0..x{nvars-1}.
ZPoly parse_polynomial(std::string_view text, int nvars, const std::vector<std::string>& names = {});
std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& names = {});
std::string to_string(const ZPoly& f, const std::vector<std::string>& names = {});
std::string to_string(const ModPoly& f, const std::vector<std::string>& names = {});

}  // namespace hfrob
