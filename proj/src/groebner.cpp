#include "hfrob/groebner.hpp"

#include <fstream>
#include <queue>
#include <sstream>

namespace hfrob {

namespace {

using TermMap = ModPoly::TermMap;

ModPoly zero_of_degree(const ResidueRing& R, int nvars, int deg) { return ModPoly(R, nvars, deg); }

void axpy_shifted(TermMap& work, const ModPoly& g, const Monomial& shift, u64 q, const ResidueRing& R) {
  for (const auto& [t, gc] : g.terms()) {
    Monomial m = t * shift;
    u64 sub = R.mul(q, gc);
    if (sub == 0) continue;
    auto [it, inserted] = work.try_emplace(m, R.neg(sub));
    if (!inserted) {
      it->second = R.sub(it->second, sub);
      if (it->second == 0) work.erase(it);
    }
  }
}

}  // namespace

StrongGB::StrongGB(ResidueRing ring, std::vector<ModPoly> generators, int max_degree)
    : ring_(ring), max_degree_(max_degree), gens_(std::move(generators)) {
  if (gens_.empty()) throw std::invalid_argument("no generators");
  nvars_ = gens_.front().nvars();
  build();
}

StrongGB StrongGB::from_parts(ResidueRing ring, std::vector<ModPoly> generators, int max_degree,
                              std::vector<GBElement> elems) {
  StrongGB gb;
  gb.ring_ = ring;
  gb.max_degree_ = max_degree;
  gb.gens_ = std::move(generators);
  gb.nvars_ = gb.gens_.front().nvars();
  gb.elems_ = std::move(elems);
  return gb;
}

int StrongGB::find_reducer(const Monomial& m, int v) const {
  int best = -1;
  for (std::size_t k = 0; k < elems_.size(); ++k) {
    const GBElement& g = elems_[k];
    if (g.lc_valuation > v) continue;
    if (best >= 0 && g.lc_valuation >= elems_[best].lc_valuation) continue;
    if (!g.poly.leading_monomial().divides(m)) continue;
    best = static_cast<int>(k);
    if (g.lc_valuation == 0) break;
  }
  return best;
}

ModPoly StrongGB::reduce(const ModPoly& f, std::vector<Step>* steps) const {
  const ResidueRing& R = ring_;
  TermMap work = f.terms();
  ModPoly rem(R, f.nvars(), f.degree());
  while (!work.empty()) {
    auto it = work.begin();
    Monomial m = it->first;
    u64 c = it->second;
    int k = find_reducer(m, R.valuation(c));
    if (k < 0) {
      rem.add_term(m, c);
      work.erase(it);
      continue;
    }
    const GBElement& g = elems_[k];
    u64 q = R.shift_down(c, g.lc_valuation);
    Monomial shift = m / g.poly.leading_monomial();
    axpy_shifted(work, g.poly, shift, q, R);
    if (steps) steps->push_back({k, shift, q});
  }
  return rem;
}

std::vector<ModPoly> StrongGB::cofactors_of(const std::vector<Step>& steps, int degree) const {
  std::vector<ModPoly> out;
  for (const ModPoly& g : gens_) out.push_back(zero_of_degree(ring_, nvars_, degree - g.degree()));
  for (const Step& st : steps) {
    const GBElement& e = elems_[st.element];
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      if (e.cofactors[k].is_zero()) continue;
      for (const auto& [t, c] : e.cofactors[k].terms()) out[k].add_term(t * st.shift, ring_.mul(c, st.coeff));
    }
  }
  return out;
}

void StrongGB::add_element(ModPoly f, std::vector<ModPoly> cof) {
  int v = 0;
  u64 u = ring_.unit_part(f.leading_coeff(), &v);
  u64 inv = ring_.inverse_or_throw(u);
  GBElement e;
  e.poly = f.scaled(inv);
  for (auto& c : cof) e.cofactors.push_back(c.scaled(inv));
  e.lc_valuation = v;
  elems_.push_back(std::move(e));
}

ModPoly s_polynomial(const GBElement& a, const GBElement& b, const ResidueRing& R) {
  const GBElement* lo = &a;
  const GBElement* hi = &b;
  if (lo->lc_valuation > hi->lc_valuation) std::swap(lo, hi);
  Monomial L = lo->poly.leading_monomial().lcm(hi->poly.leading_monomial());
  u64 scale = ipow(R.prime(), hi->lc_valuation - lo->lc_valuation) % R.modulus();
  ModPoly s = lo->poly.times_monomial(L / lo->poly.leading_monomial(), scale);
  s -= hi->poly.times_monomial(L / hi->poly.leading_monomial(), R.one());
  return s;
}

ModPoly annihilator(const GBElement& g, const ResidueRing& R) {
  u64 scale = ipow(R.prime(), R.precision() - g.lc_valuation) % R.modulus();
  return g.poly.scaled(scale);
}

void StrongGB::build() {
  struct Task {
    int degree;
    long seq;
    int kind;  // 0 generator, 1 S-pair, 2 annihilator
    int a, b;
    bool operator>(const Task& o) const { return degree != o.degree ? degree > o.degree : seq > o.seq; }
  };
  std::priority_queue<Task, std::vector<Task>, std::greater<Task>> queue;
  long seq = 0;
  for (std::size_t k = 0; k < gens_.size(); ++k)
    if (!gens_[k].is_zero() && gens_[k].degree() <= max_degree_)
      queue.push({gens_[k].degree(), seq++, 0, static_cast<int>(k), 0});

  auto schedule_new = [&](int idx) {
    const GBElement& e = elems_[idx];
    if (e.lc_valuation > 0) queue.push({e.poly.degree(), seq++, 2, idx, 0});
    for (int k = 0; k < idx; ++k) {
      Monomial L = elems_[k].poly.leading_monomial().lcm(e.poly.leading_monomial());
      if (L.degree() <= max_degree_) queue.push({L.degree(), seq++, 1, k, idx});
    }
  };

  while (!queue.empty()) {
    Task t = queue.top();
    queue.pop();
    ModPoly f;
    if (t.kind == 0)
      f = gens_[t.a];
    else if (t.kind == 1)
      f = s_polynomial(elems_[t.a], elems_[t.b], ring_);
    else
      f = annihilator(elems_[t.a], ring_);
    if (f.is_zero()) continue;
    std::vector<Step> steps;
    ModPoly rem = reduce(f, &steps);
    if (rem.is_zero()) continue;

    // cofactors of the source
    std::vector<ModPoly> cof;
    for (const ModPoly& g : gens_) cof.push_back(zero_of_degree(ring_, nvars_, f.degree() - g.degree()));
    auto add_scaled = [&](const GBElement& e, const Monomial& x, u64 c) {
      for (std::size_t k = 0; k < gens_.size(); ++k)
        for (const auto& [m, a] : e.cofactors[k].terms()) cof[k].add_term(m * x, ring_.mul(a, c));
    };
    if (t.kind == 0) {
      cof[t.a].add_term(Monomial(nvars_), ring_.one());
    } else if (t.kind == 1) {
      const GBElement* lo = &elems_[t.a];
      const GBElement* hi = &elems_[t.b];
      if (lo->lc_valuation > hi->lc_valuation) std::swap(lo, hi);
      Monomial L = lo->poly.leading_monomial().lcm(hi->poly.leading_monomial());
      add_scaled(*lo, L / lo->poly.leading_monomial(),
                 ipow(ring_.prime(), hi->lc_valuation - lo->lc_valuation) % ring_.modulus());
      add_scaled(*hi, L / hi->poly.leading_monomial(), ring_.neg(ring_.one()));
    } else {
      add_scaled(elems_[t.a], Monomial(nvars_),
                 ipow(ring_.prime(), ring_.precision() - elems_[t.a].lc_valuation) % ring_.modulus());
    }
    std::vector<ModPoly> red = cofactors_of(steps, f.degree());
    for (std::size_t k = 0; k < gens_.size(); ++k) cof[k] -= red[k];
    add_element(std::move(rem), std::move(cof));
    schedule_new(static_cast<int>(elems_.size()) - 1);
  }
}

std::vector<ModPoly> jacobian_generators(const HypersurfaceSpec& spec, const ResidueRing& ring,
                                         bool include_P) {
  ModPoly P = reduce_mod(spec.lift, ring);
  std::vector<ModPoly> gens;
  for (int i = 0; i <= spec.n; ++i) gens.push_back(partial(P, i));
  if (include_P) gens.push_back(P);
  return gens;
}

StrongGB strong_groebner(const HypersurfaceSpec& spec, int s, int max_degree) {
  ResidueRing R(spec.p, s);
  if (max_degree < 0) max_degree = socle_degree(spec.n, spec.d);
  return StrongGB(R, jacobian_generators(spec, R), max_degree);
}

Division divide_with_cofactors(const ModPoly& g, const StrongGB& gb) {
  std::vector<StrongGB::Step> steps;
  Division d;
  d.remainder = gb.reduce(g, &steps);
  d.cofactors = gb.cofactors_of(steps, g.degree());
  return d;
}

// ---- cache

u64 fnv1a(std::string_view data) {
  u64 h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string gb_cache_key(const HypersurfaceSpec& spec, int s, int max_degree) {
  std::ostringstream os;
  os << "gb1|" << spec.p << "|" << spec.n << "|" << s << "|" << max_degree << "|" << to_string(spec.lift);
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

namespace {

void write_poly(std::ostream& os, const ModPoly& f) {
  os << f.degree() << " " << f.size();
  for (const auto& [m, c] : f.terms()) {
    for (int i = 0; i < m.nvars(); ++i) os << " " << m[i];
    os << " " << c;
  }
  os << "\n";
}

ModPoly read_poly(std::istream& is, const ResidueRing& R, int nvars) {
  int deg;
  std::size_t count;
  if (!(is >> deg >> count)) throw std::runtime_error("truncated cache");
  ModPoly f(R, nvars, deg);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<int> e(nvars);
    for (int& x : e) is >> x;
    u64 c;
    is >> c;
    f.add_term(Monomial::from_vector(e), c);
  }
  if (!is) throw std::runtime_error("truncated cache");
  return f;
}

}  // namespace

void save_gb(const std::string& path, const StrongGB& gb, const std::string& key) {
  std::ofstream os(path + ".tmp");
  os << "hfrob-gb 1\n" << key << "\n";
  os << gb.ring().prime() << " " << gb.ring().precision() << " " << gb.nvars() << " " << gb.max_degree() << "\n";
  os << gb.generators().size() << "\n";
  for (const auto& g : gb.generators()) write_poly(os, g);
  os << gb.elements().size() << "\n";
  for (const auto& e : gb.elements()) {
    os << e.lc_valuation << "\n";
    write_poly(os, e.poly);
    for (const auto& c : e.cofactors) write_poly(os, c);
  }
  os.close();
  std::rename((path + ".tmp").c_str(), path.c_str());
}

std::optional<StrongGB> load_gb(const std::string& path, const std::string& key) {
  std::ifstream is(path);
  if (!is) return std::nullopt;
  try {
    std::string magic, version, k;
    is >> magic >> version >> k;
    if (magic != "hfrob-gb" || version != "1" || k != key) return std::nullopt;
    u64 p;
    int s, nvars, maxdeg;
    std::size_t ng, ne;
    is >> p >> s >> nvars >> maxdeg >> ng;
    ResidueRing R(p, s);
    std::vector<ModPoly> gens;
    for (std::size_t i = 0; i < ng; ++i) gens.push_back(read_poly(is, R, nvars));
    is >> ne;
    std::vector<GBElement> elems(ne);
    for (auto& e : elems) {
      is >> e.lc_valuation;
      e.poly = read_poly(is, R, nvars);
      for (std::size_t i = 0; i < ng; ++i) e.cofactors.push_back(read_poly(is, R, nvars));
    }
    return StrongGB::from_parts(R, std::move(gens), maxdeg, std::move(elems));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace hfrob
