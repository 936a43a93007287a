#include "hfrob/hpoly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace hfrob {

Monomial::Monomial(std::initializer_list<int> exps) : Monomial(static_cast<int>(exps.size())) {
  int i = 0;
  for (int e : exps) set(i++, e);
}

Monomial Monomial::from_vector(const std::vector<int>& exps) {
  Monomial m(static_cast<int>(exps.size()));
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 0) throw std::invalid_argument("negative exponent");
    m.set(static_cast<int>(i), exps[i]);
  }
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r = *this;
  for (int i = 0; i < nvars_; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] + o.e_[i]);
  r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
  return r;
}

Monomial Monomial::operator/(const Monomial& o) const {
  Monomial r = *this;
  for (int i = 0; i < nvars_; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] - o.e_[i]);
  r.deg_ = static_cast<std::uint16_t>(deg_ - o.deg_);
  return r;
}

Monomial Monomial::lcm(const Monomial& o) const {
  Monomial r(nvars_);
  for (int i = 0; i < nvars_; ++i) r.set(i, std::max(e_[i], o.e_[i]));
  return r;
}

Monomial Monomial::scaled(int p) const {
  Monomial r = *this;
  for (int i = 0; i < nvars_; ++i) r.e_[i] = static_cast<std::uint16_t>(e_[i] * p);
  r.deg_ = static_cast<std::uint16_t>(deg_ * p);
  return r;
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (int i = 0; i < nvars_; ++i) h = (h ^ e_[i]) * 1099511628211ull;
  return h;
}

int grevlex_compare(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  for (int i = a.nvars() - 1; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

namespace {
void enum_rec(int nvars, int i, int left, Monomial& cur, std::vector<Monomial>& out) {
  if (i == nvars - 1) {
    cur.set(i, left);
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur.set(i, e);
    enum_rec(nvars, i + 1, left - e, cur, out);
  }
  cur.set(i, 0);
}
}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int degree) {
  std::vector<Monomial> out;
  if (degree < 0) return out;
  Monomial cur(nvars);
  enum_rec(nvars, 0, degree, cur, out);
  std::sort(out.begin(), out.end(), GrevlexGreater());
  return out;
}

u64 count_monomials(int nvars, int degree) {
  if (degree < 0) return 0;
  u64 r = 1;
  for (int k = 1; k < nvars; ++k) r = r * static_cast<u64>(degree + k) / static_cast<u64>(k);
  return r;
}

ModPoly reduce_mod(const ZPoly& f, const ResidueRing& ring) {
  return map_coefficients(f, ring, [&](const BigInt& c) { return ring.from_big(c); });
}

ModPoly change_precision(const ModPoly& f, const ResidueRing& ring) {
  return map_coefficients(f, ring, [&](u64 c) { return c % ring.modulus(); });
}

ZPoly lift_to_integers(const ModPoly& f) {
  return map_coefficients(f, IntegerRing{}, [](u64 c) { return BigInt(c); });
}

namespace {
struct Box {
  int nvars, degree;
  std::vector<u64> stride;
  Box(int nv, int deg) : nvars(nv), degree(deg), stride(nv, 0) {
    u64 s = 1;
    for (int i = 1; i < nv; ++i) {
      stride[i] = s;
      s *= static_cast<u64>(deg + 1);
    }
    size = s;
  }
  u64 index(const Monomial& m) const {
    u64 k = 0;
    for (int i = 1; i < nvars; ++i) k += stride[i] * static_cast<u64>(m[i]);
    return k;
  }
  u64 size = 1;
};
}  // namespace

ModPoly multiply(const ModPoly& a, const ModPoly& b) {
  const int deg = a.degree() + b.degree();
  const int nv = a.nvars();
  const ResidueRing& R = a.ring();
  double box = 1;
  for (int i = 1; i < nv; ++i) box *= deg + 1;
  if (box > double(1 << 25) || double(a.size()) * double(b.size()) < 4096.0) return a * b;
  Box bx(nv, deg);
  std::vector<u64> acc(bx.size, 0);
  std::vector<std::pair<u64, u64>> ta, tb;
  ta.reserve(a.size());
  tb.reserve(b.size());
  for (const auto& [m, c] : a.terms()) ta.emplace_back(bx.index(m), c);
  for (const auto& [m, c] : b.terms()) tb.emplace_back(bx.index(m), c);
  for (const auto& [ia, ca] : ta)
    for (const auto& [ib, cb] : tb) acc[ia + ib] = R.add(acc[ia + ib], R.mul(ca, cb));
  ModPoly r(R, nv, deg);
  for (const Monomial& m : monomials_of_degree(nv, deg)) {
    u64 c = acc[bx.index(m)];
    if (c) r.add_term(m, c);
  }
  return r;
}

ZPoly compute_delta(const ZPoly& lift, u64 p) {
  ZPoly num = frob_substitute(lift, static_cast<int>(p)) - pow(lift, static_cast<int>(p));
  ZPoly r(IntegerRing{}, lift.nvars(), lift.degree() * static_cast<int>(p));
  for (const auto& [m, c] : num.terms()) {
    if (c % p != 0) throw std::logic_error("Frobenius lift numerator not divisible by p");
    r.add_term(m, c / p);
  }
  return r;
}

ModPoly compute_delta_mod(const ZPoly& lift, u64 p, int prec) {
  ResidueRing big(p, prec + 1), out(p, prec);
  ModPoly f = reduce_mod(lift, big);
  ModPoly fp = one_poly(big, f.nvars());
  ModPoly b = f;
  for (u64 e = p; e > 0; e >>= 1) {
    if (e & 1) fp = multiply(fp, b);
    if (e > 1) b = multiply(b, b);
  }
  ModPoly num = frob_substitute(f, static_cast<int>(p)) - fp;
  ModPoly r(out, f.nvars(), num.degree());
  for (const auto& [m, c] : num.terms()) {
    if (c % p != 0) throw std::logic_error("Frobenius lift numerator not divisible by p");
    r.add_term(m, (c / p) % out.modulus());
  }
  return r;
}

// ---- text form

namespace {

std::string default_name(int i) { return "x" + std::to_string(i); }

// Recursive descent over sums, products, powers and parentheses. Intermediate
// results need not be homogeneous; the final polynomial must be.
class Parser {
 public:
  using Expr = std::map<Monomial, BigInt, GrevlexGreater>;

  Parser(std::string_view s, int nvars, const std::vector<std::string>& names)
      : s_(s), nvars_(nvars) {
    for (int i = 0; i < nvars; ++i)
      names_.push_back(i < static_cast<int>(names.size()) ? names[i] : default_name(i));
  }

  ZPoly run() {
    skip();
    if (at_end()) throw ParseError("empty polynomial");
    Expr e = sum();
    skip();
    if (!at_end()) throw ParseError("unexpected character '" + std::string(1, peek()) + "'");
    if (e.empty()) return ZPoly(IntegerRing{}, nvars_, 0);
    int deg = e.begin()->first.degree();
    ZPoly f(IntegerRing{}, nvars_, deg);
    for (const auto& [m, c] : e) {
      if (m.degree() != deg) throw ParseError("not homogeneous");
      f.add_term(m, c);
    }
    return f;
  }

 private:
  static void accumulate(Expr& e, const Monomial& m, const BigInt& c) {
    if (c == 0) return;
    auto [it, ins] = e.try_emplace(m, c);
    if (!ins) {
      it->second += c;
      if (it->second == 0) e.erase(it);
    }
  }
  static Expr product(const Expr& a, const Expr& b) {
    Expr r;
    for (const auto& [ma, ca] : a)
      for (const auto& [mb, cb] : b) accumulate(r, ma * mb, ca * cb);
    return r;
  }
  Expr constant(const BigInt& c) const {
    Expr e;
    accumulate(e, Monomial(nvars_), c);
    return e;
  }

  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool starts(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  Expr sum() {
    Expr acc;
    bool first = true;
    for (;;) {
      skip();
      int sign = 1;
      if (!at_end() && (peek() == '+' || peek() == '-')) {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
      } else if (!first) {
        break;
      }
      first = false;
      for (const auto& [m, c] : term()) accumulate(acc, m, sign * c);
      skip();
      if (at_end() || (peek() != '+' && peek() != '-')) break;
    }
    return acc;
  }

  Expr term() {
    Expr acc = power();
    for (;;) {
      skip();
      if (at_end() || peek() != '*' || starts("**")) break;
      ++pos_;
      acc = product(acc, power());
    }
    return acc;
  }

  Expr power() {
    Expr base = primary();
    skip();
    if (!at_end() && (peek() == '^' || starts("**"))) {
      pos_ += peek() == '^' ? 1 : 2;
      skip();
      BigInt ex;
      if (!number(&ex)) throw ParseError("missing exponent");
      Expr r = constant(1);
      for (int k = 0; k < static_cast<int>(ex); ++k) r = product(r, base);
      return r;
    }
    return base;
  }

  Expr primary() {
    skip();
    if (at_end()) throw ParseError("unexpected end of input");
    if (peek() == '(') {
      ++pos_;
      Expr e = sum();
      skip();
      if (at_end() || peek() != ')') throw ParseError("missing ')'");
      ++pos_;
      return e;
    }
    if (peek() == '-' || peek() == '+') {
      bool neg = peek() == '-';
      ++pos_;
      Expr e = power();
      if (neg)
        for (auto& [m, c] : e) c = -c;
      return e;
    }
    BigInt k;
    if (number(&k)) return constant(k);
    if (std::isalpha(static_cast<unsigned char>(peek()))) {
      Monomial m(nvars_);
      int v = variable();
      m.set(v, 1);
      Expr e;
      e.emplace(m, 1);
      return e;
    }
    throw ParseError("unexpected character '" + std::string(1, peek()) + "'");
  }

  bool number(BigInt* out) {
    size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) return false;
    *out = BigInt(std::string(s_.substr(start, pos_ - start)));
    return true;
  }

  int variable() {
    int best = -1;
    size_t best_len = 0;
    for (int i = 0; i < nvars_; ++i) {
      const std::string& nm = names_[i];
      if (!starts(nm) || nm.size() <= best_len) continue;
      // x1 must not match the start of x10
      size_t end = pos_ + nm.size();
      if (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end])) &&
          std::isdigit(static_cast<unsigned char>(nm.back())))
        continue;
      best = i;
      best_len = nm.size();
    }
    if (best < 0) throw ParseError("unknown variable at position " + std::to_string(pos_));
    pos_ += best_len;
    return best;
  }

  std::string_view s_;
  size_t pos_ = 0;
  int nvars_;
  std::vector<std::string> names_;
};

template <class C>
std::string poly_string(const std::map<Monomial, C, GrevlexGreater>& terms,
                        const std::vector<std::string>& names,
                        std::function<BigInt(const C&)> signed_value) {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms) {
    BigInt v = signed_value(c);
    bool neg = v < 0;
    if (neg) v = -v;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    std::string mono = monomial_to_string(m, names);
    if (mono == "1")
      os << v;
    else if (v == 1)
      os << mono;
    else
      os << v << "*" << mono;
  }
  return os.str();
}

}  // namespace

ZPoly parse_polynomial(std::string_view text, int nvars, const std::vector<std::string>& names) {
  return Parser(text, nvars, names).run();
}

std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& names) {
  std::string out;
  for (int i = 0; i < m.nvars(); ++i) {
    if (m[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += i < static_cast<int>(names.size()) ? names[i] : default_name(i);
    if (m[i] > 1) out += "^" + std::to_string(m[i]);
  }
  return out.empty() ? "1" : out;
}

std::string to_string(const ZPoly& f, const std::vector<std::string>& names) {
  return poly_string<BigInt>(f.terms(), names, [](const BigInt& c) { return c; });
}

std::string to_string(const ModPoly& f, const std::vector<std::string>& names) {
  const ResidueRing R = f.ring();
  return poly_string<u64>(f.terms(), names, [R](const u64& c) { return BigInt(R.centered(c)); });
}

}  // namespace hfrob
