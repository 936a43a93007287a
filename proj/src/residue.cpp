#include "hfrob/residue.hpp"

#include <algorithm>
#include <limits>

namespace hfrob {

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

u64 ipow(u64 p, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > (u64{1} << 63) / p) throw std::overflow_error("p^e exceeds 2^63");
    r *= p;
  }
  return r;
}

int ilog(u64 x, u64 p) {
  int e = 0;
  u64 q = 1;
  while (q <= x / p) {
    q *= p;
    ++e;
  }
  return e;
}

int ilog(const BigInt& x, u64 p) {
  int e = 0;
  BigInt q = p;
  while (q <= x) {
    q *= p;
    ++e;
  }
  return e;
}

int vp(i64 x, u64 p) {
  if (x == 0) throw std::invalid_argument("valuation of zero");
  u64 a = x < 0 ? static_cast<u64>(-(x + 1)) + 1 : static_cast<u64>(x);
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

int vp(const BigInt& x, u64 p) {
  if (x == 0) throw std::invalid_argument("valuation of zero");
  BigInt a = abs(x);
  int v = 0;
  while (a % p == 0) {
    a /= p;
    ++v;
  }
  return v;
}

int vp_factorial(i64 k, u64 p) {
  int v = 0;
  for (i64 q = static_cast<i64>(p); q <= k; q *= static_cast<i64>(p)) {
    v += static_cast<int>(k / q);
    if (q > std::numeric_limits<i64>::max() / static_cast<i64>(p)) break;
  }
  return v;
}

ResidueRing::ResidueRing(u64 p, int m) : p_(p), m_(m) {
  if (p < 2) throw std::invalid_argument("modulus base must be >= 2");
  if (m < 0) throw std::invalid_argument("negative precision");
  mod_ = ipow(p, m);
  small_ = mod_ < (u64{1} << 32);
}

u64 ResidueRing::from_int(i64 x) const {
  i64 r = x % static_cast<i64>(mod_);
  return r < 0 ? static_cast<u64>(r + static_cast<i64>(mod_)) : static_cast<u64>(r);
}

u64 ResidueRing::from_big(const BigInt& x) const {
  BigInt r = x % mod_;
  if (r < 0) r += mod_;
  return static_cast<u64>(r);
}

u64 ResidueRing::pow(u64 a, u64 e) const {
  u64 r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int ResidueRing::valuation(u64 a) const {
  if (a == 0) return m_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

u64 ResidueRing::unit_part(u64 a, int* v) const {
  int k = 0;
  if (a == 0) {
    *v = m_;
    return 0;
  }
  while (a % p_ == 0) {
    a /= p_;
    ++k;
  }
  *v = k;
  return a;
}

std::optional<u64> ResidueRing::inverse(u64 a) const {
  if (mod_ == 1) return 0;
  if (a % p_ == 0) return std::nullopt;
  __int128 r0 = mod_, r1 = a, t0 = 0, t1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  __int128 m = mod_;
  t0 %= m;
  if (t0 < 0) t0 += m;
  return static_cast<u64>(t0);
}

u64 ResidueRing::inverse_or_throw(u64 a) const {
  auto r = inverse(a);
  if (!r) throw NotInvertible();
  return *r;
}

u64 ResidueRing::shift_down(u64 a, int k) const {
  for (int i = 0; i < k; ++i) a /= p_;
  return a;
}

i64 ResidueRing::centered(u64 a) const {
  if (a > mod_ / 2) return -static_cast<i64>(mod_ - a);
  return static_cast<i64>(a);
}

PResidue::PResidue(u64 p, int m, i64 value) : ring_(p, m), value_(ring_.from_int(value)) {
  if (m < 1) throw std::invalid_argument("precision must be positive");
}

PResidue PResidue::truncate(int m) const {
  ResidueRing r(ring_.prime(), std::min(m, ring_.precision()));
  return PResidue(r, value_ % r.modulus());
}

namespace {
ResidueRing common(const PResidue& a, const PResidue& b) {
  if (a.prime() != b.prime()) throw std::invalid_argument("mixed primes");
  return a.precision() <= b.precision() ? a.ring() : b.ring();
}
}  // namespace

PResidue operator+(const PResidue& a, const PResidue& b) {
  ResidueRing r = common(a, b);
  return PResidue(r, r.add(a.value() % r.modulus(), b.value() % r.modulus()));
}
PResidue operator-(const PResidue& a, const PResidue& b) {
  ResidueRing r = common(a, b);
  return PResidue(r, r.sub(a.value() % r.modulus(), b.value() % r.modulus()));
}
PResidue operator*(const PResidue& a, const PResidue& b) {
  ResidueRing r = common(a, b);
  return PResidue(r, r.mul(a.value() % r.modulus(), b.value() % r.modulus()));
}

Valuation val(const PResidue& a) {
  if (a.is_zero()) return {a.precision(), true};
  return {a.ring().valuation(a.value()), false};
}

PResidue invert_unit(const PResidue& a) {
  return PResidue(a.ring(), a.ring().inverse_or_throw(a.value()));
}

// ---- ScaledResidue

ScaledResidue ScaledResidue::exact_zero(u64 p) {
  ScaledResidue z;
  z.p_ = p;
  z.exact_zero_ = true;
  z.shift_ = std::numeric_limits<int>::max() / 4;
  return z;
}

ScaledResidue ScaledResidue::zero(u64 p, int abs_precision) {
  ScaledResidue z;
  z.p_ = p;
  z.shift_ = abs_precision;
  z.rel_ = 0;
  return z;
}

ScaledResidue ScaledResidue::from_residue(u64 p, u64 value, int m, int shift) {
  ResidueRing ring(p, m);
  value %= ring.modulus();
  if (value == 0) return zero(p, m + shift);
  int v = 0;
  u64 u = ring.unit_part(value, &v);
  ScaledResidue s;
  s.p_ = p;
  s.unit_ = u;
  s.shift_ = shift + v;
  s.rel_ = m - v;
  return s;
}

ScaledResidue ScaledResidue::from_int(u64 p, const BigInt& value, int abs_precision) {
  if (value == 0) return zero(p, abs_precision);
  int v = vp(value, p);
  if (v >= abs_precision) return zero(p, abs_precision);
  BigInt u = value;
  for (int i = 0; i < v; ++i) u /= p;
  ResidueRing ring(p, abs_precision - v);
  ScaledResidue s;
  s.p_ = p;
  s.unit_ = ring.from_big(u);
  s.shift_ = v;
  s.rel_ = abs_precision - v;
  return s;
}

u64 ScaledResidue::residue(int r) const {
  if (r <= 0) return 0;
  if (exact_zero_) return 0;
  if (absolute_precision() < r) throw std::domain_error("insufficient precision for residue");
  if (unit_ == 0 || shift_ >= r) return 0;
  if (shift_ < 0) throw std::domain_error("residue of a non-integral value");
  ResidueRing ring(p_, r);
  return ring.mul(unit_ % ring.modulus(), ipow(p_, shift_));
}

boost::multiprecision::cpp_rational ScaledResidue::to_rational() const {
  using boost::multiprecision::cpp_rational;
  if (is_zero()) return 0;
  cpp_rational r{BigInt(unit_)};
  BigInt pk = boost::multiprecision::pow(BigInt(p_), std::abs(shift_));
  if (shift_ >= 0) return r * pk;
  return r / pk;
}

ScaledResidue operator+(const ScaledResidue& a, const ScaledResidue& b) {
  if (a.p_ != b.p_) throw std::invalid_argument("mixed primes");
  if (a.exact_zero_) return b;
  if (b.exact_zero_) return a;
  int abs_prec = std::min(a.absolute_precision(), b.absolute_precision());
  int vmin = std::min(a.shift_, b.shift_);
  if (abs_prec <= vmin) return ScaledResidue::zero(a.p_, abs_prec);
  ResidueRing ring(a.p_, abs_prec - vmin);
  u64 x = 0;
  for (const ScaledResidue* t : {&a, &b}) {
    if (t->unit_ == 0 || t->shift_ - vmin >= ring.precision()) continue;
    x = ring.add(x, ring.mul(t->unit_ % ring.modulus(), ipow(a.p_, t->shift_ - vmin)));
  }
  return ScaledResidue::from_residue(a.p_, x, abs_prec - vmin, vmin);
}

ScaledResidue ScaledResidue::operator-() const {
  if (is_zero()) return *this;
  ScaledResidue r = *this;
  r.unit_ = ResidueRing(p_, rel_).neg(unit_);
  return r;
}

ScaledResidue operator-(const ScaledResidue& a, const ScaledResidue& b) { return a + (-b); }

ScaledResidue operator*(const ScaledResidue& a, const ScaledResidue& b) {
  if (a.p_ != b.p_) throw std::invalid_argument("mixed primes");
  if (a.exact_zero_ || b.exact_zero_) return ScaledResidue::exact_zero(a.p_);
  int abs_prec = std::min(a.absolute_precision() + b.shift_, b.absolute_precision() + a.shift_);
  if (a.unit_ == 0 || b.unit_ == 0) return ScaledResidue::zero(a.p_, abs_prec);
  int rel = std::min(a.rel_, b.rel_);
  ResidueRing ring(a.p_, rel);
  ScaledResidue r;
  r.p_ = a.p_;
  r.unit_ = ring.mul(a.unit_ % ring.modulus(), b.unit_ % ring.modulus());
  r.shift_ = a.shift_ + b.shift_;
  r.rel_ = rel;
  return r;
}

ScaledResidue ScaledResidue::with_absolute_precision(int a) const {
  if (exact_zero_) return zero(p_, a);
  if (a >= absolute_precision()) return *this;
  if (a <= shift_ || unit_ == 0) return zero(p_, a);
  ScaledResidue r = *this;
  r.rel_ = a - shift_;
  r.unit_ %= ipow(p_, r.rel_);
  return r;
}

ScaledResidue divide_tracked(const ScaledResidue& a, const BigInt& b) {
  if (b == 0) throw std::invalid_argument("division by zero");
  int v = vp(b, a.prime());
  BigInt u = b;
  for (int i = 0; i < v; ++i) u /= a.prime();
  int rel = std::max(a.relative_precision(), 1);
  return divide_tracked(a, v, ResidueRing(a.prime(), rel).from_big(u));
}

ScaledResidue divide_tracked(const ScaledResidue& a, int v, u64 unit) {
  if (a.is_exact_zero()) return a;
  if (a.unit() == 0) return ScaledResidue::zero(a.prime(), a.absolute_precision() - v);
  ResidueRing ring(a.prime(), a.relative_precision());
  u64 inv = ring.inverse_or_throw(unit % ring.modulus());
  return ScaledResidue::from_residue(a.prime(), ring.mul(a.unit(), inv), a.relative_precision(),
                                     a.shift() - v);
}

// ---- UniPoly

UniPoly::UniPoly(ResidueRing ring, std::vector<u64> coeffs) : ring_(ring), c_(std::move(coeffs)) {
  for (auto& x : c_) x %= ring_.modulus();
  trim();
}

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

int UniPoly::gauss_val() const {
  int v = ring_.precision();
  for (u64 x : c_) v = std::min(v, ring_.valuation(x));
  return v;
}

UniPoly operator+(const UniPoly& a, const UniPoly& b) {
  std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.ring_.add(a.coeff(int(i)), b.coeff(int(i)));
  return UniPoly(a.ring_, std::move(c));
}

UniPoly operator-(const UniPoly& a, const UniPoly& b) {
  std::vector<u64> c(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.ring_.sub(a.coeff(int(i)), b.coeff(int(i)));
  return UniPoly(a.ring_, std::move(c));
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
  if (a.is_zero() || b.is_zero()) return UniPoly(a.ring_);
  std::vector<u64> c(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j)
      c[i + j] = a.ring_.add(c[i + j], a.ring_.mul(a.c_[i], b.c_[j]));
  return UniPoly(a.ring_, std::move(c));
}

void UniPoly::divrem(const UniPoly& monic, UniPoly* q, UniPoly* r) const {
  if (!monic.is_monic()) throw std::invalid_argument("divisor must be monic");
  std::vector<u64> rem = c_;
  int dm = monic.degree();
  std::vector<u64> quo(rem.size() >= size_t(dm) + 1 ? rem.size() - dm : 0, 0);
  for (int k = static_cast<int>(rem.size()) - 1; k >= dm; --k) {
    u64 t = rem[k];
    if (t == 0) continue;
    quo[k - dm] = t;
    for (int i = 0; i <= dm; ++i) rem[k - dm + i] = ring_.sub(rem[k - dm + i], ring_.mul(t, monic.c_[i]));
  }
  if (q) *q = UniPoly(ring_, std::move(quo));
  if (r) {
    if (rem.size() > size_t(dm)) rem.resize(dm);
    *r = UniPoly(ring_, std::move(rem));
  }
}

UniPoly UniPoly::pow(int e) const {
  UniPoly r(ring_, {ring_.one()});
  for (int i = 0; i < e; ++i) r = r * *this;
  return r;
}

}  // namespace hfrob
