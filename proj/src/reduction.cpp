#include "hfrob/reduction.hpp"

#include "hfrob/linalg_fp.hpp"

#include <algorithm>
#include <stdexcept>

namespace hfrob {

namespace {

ModPoly derivative_sum(const std::vector<ModPoly>& a, const ResidueRing& R, int nvars, int degree) {
  ModPoly out(R, nvars, degree);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() || a[i].degree() < 1) continue;
    out += partial(a[i], static_cast<int>(i));
  }
  return out;
}

// basis indices of the given pole, keyed by monomial
std::unordered_map<Monomial, int, MonomialHash> basis_slots(const CohomologyBasis& basis, int pole) {
  std::unordered_map<Monomial, int, MonomialHash> out;
  for (std::size_t k = 0; k < basis.dimension(); ++k)
    if (basis[k].pole == pole) out.emplace(basis[k].mono, static_cast<int>(k));
  return out;
}

// fill from x0 first
Monomial greedy_divisor(const Monomial& g, int e0) {
  Monomial b(g.nvars());
  int rem = e0;
  for (int i = 0; i < g.nvars(); ++i) {
    int t = std::min(g[i], rem);
    b.set(i, t);
    rem -= t;
  }
  return b;
}

}  // namespace

std::vector<Identity> linear_identities(const HypersurfaceSpec& spec, const CohomologyBasis& basis,
                                        const ResidueRing& R, int degree, int pole) {
  const int nv = spec.nvars();
  std::vector<Monomial> cols = monomials_of_degree(nv, degree);
  const std::size_t N = cols.size();
  std::unordered_map<Monomial, std::size_t, MonomialHash> col_of;
  for (std::size_t k = 0; k < N; ++k) col_of.emplace(cols[k], k);
  std::vector<ModPoly> gens = jacobian_generators(spec, R);

  // candidate rows: basis monomials, then generator multiples
  struct Source {
    int gen;  // -1 for a basis monomial
    Monomial mono;
    int basis_index;
  };
  std::vector<Source> chosen;
  std::vector<std::vector<u64>> rows;
  FpEchelon ech(spec.p, N);
  auto offer = [&](const Source& src, std::vector<u64> row) {
    if (ech.rank() == N) return;
    std::vector<u64> modp(N);
    for (std::size_t k = 0; k < N; ++k) modp[k] = row[k] % spec.p;
    if (ech.insert(std::move(modp))) {
      chosen.push_back(src);
      rows.push_back(std::move(row));
    }
  };
  if (pole > 0) {
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
      if (basis[k].pole != pole) continue;
      std::vector<u64> row(N, 0);
      row[col_of.at(basis[k].mono)] = R.one();
      offer({-1, basis[k].mono, static_cast<int>(k)}, std::move(row));
    }
  }
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].is_zero()) continue;
    for (const Monomial& u : monomials_of_degree(nv, degree - gens[g].degree())) {
      std::vector<u64> row(N, 0);
      for (const auto& [t, c] : gens[g].terms()) row[col_of.at(t * u)] = c;
      offer({static_cast<int>(g), u, -1}, std::move(row));
    }
  }
  if (ech.rank() != N)
    throw std::logic_error("Jacobian relations do not span degree " + std::to_string(degree) + " mod p");

  // invert the square system over Z/p^w with unit pivots
  std::vector<std::vector<u64>> S = rows;
  std::vector<std::vector<u64>> T(N, std::vector<u64>(N, 0));
  for (std::size_t k = 0; k < N; ++k) T[k][k] = R.one();
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    while (piv < N && S[piv][c] % spec.p == 0) ++piv;
    if (piv == N) throw std::logic_error("singular Jacobian system");
    std::swap(S[piv], S[c]);
    std::swap(T[piv], T[c]);
    u64 inv = R.inverse_or_throw(S[c][c]);
    for (std::size_t k = 0; k < N; ++k) {
      S[c][k] = R.mul(S[c][k], inv);
      T[c][k] = R.mul(T[c][k], inv);
    }
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c || S[r][c] == 0) continue;
      u64 f = S[r][c];
      for (std::size_t k = 0; k < N; ++k) {
        if (S[c][k]) S[r][k] = R.sub(S[r][k], R.mul(f, S[c][k]));
        if (T[c][k]) T[r][k] = R.sub(T[r][k], R.mul(f, T[c][k]));
      }
    }
  }
  // after elimination S = I and T = S^{-1}, with rows of S permuted in step;
  // T[c] expresses column c's unit vector in terms of the chosen rows
  std::vector<Identity> out(N);
  const int n = spec.n;
  for (std::size_t c = 0; c < N; ++c) {
    Identity& id = out[c];
    for (int i = 0; i <= n; ++i) id.a.emplace_back(R, nv, degree - gens[i].degree());
    id.c = ModPoly(R, nv, degree - spec.d);
    id.coords.assign(basis.dimension(), 0);
    for (std::size_t r = 0; r < N; ++r) {
      u64 coef = T[c][r];
      if (coef == 0) continue;
      const Source& src = chosen[r];
      if (src.gen < 0)
        id.coords[src.basis_index] = R.add(id.coords[src.basis_index], coef);
      else if (src.gen <= n)
        id.a[src.gen].add_term(src.mono, coef);
      else
        id.c.add_term(src.mono, coef);
    }
  }
  return out;
}

ReductionTables::ReductionTables(const HypersurfaceSpec& spec, const CohomologyBasis& basis, int w,
                                 const StrongGB* gb)
    : spec_(spec), basis_(basis), ring_(spec.p, w), e0_(socle_degree(spec.n, spec.d)) {
  if (gb && !(gb->ring() == ring_)) throw std::invalid_argument("Groebner basis precision mismatch");
  if (gb && gb->max_degree() < e0_) throw std::invalid_argument("Groebner basis truncated too low");
  gens_ = jacobian_generators(spec_, ring_);
  high_monos_ = monomials_of_degree(spec_.nvars(), e0_);
  for (std::size_t k = 0; k < high_monos_.size(); ++k) high_index_.emplace(high_monos_[k], k);
  high_ = build_degree(e0_, 0, gb);
  for (int m = 1; !is_high(m); ++m) {
    if (degree_at(m) < 0) continue;
    LowTable t;
    t.monos = monomials_of_degree(spec_.nvars(), degree_at(m));
    for (std::size_t k = 0; k < t.monos.size(); ++k) t.index.emplace(t.monos[k], k);
    t.ids = build_degree(degree_at(m), m, gb);
    low_.emplace(m, std::move(t));
  }
}

const Identity& ReductionTables::low(int pole, const Monomial& gamma) const {
  const LowTable& t = low_.at(pole);
  return t.ids.at(t.index.at(gamma));
}

std::vector<Identity> ReductionTables::build_degree(int degree, int pole, const StrongGB* gb) {
  const int nv = spec_.nvars();
  const int n = spec_.n;
  const ResidueRing& R = ring_;
  std::vector<Monomial> monos = monomials_of_degree(nv, degree);
  std::vector<Identity> ids;
  bool ok = gb != nullptr;
  if (ok) {
    auto slots = basis_slots(basis_, pole);
    for (const Monomial& g : monos) {
      Division dv = divide_with_cofactors(ModPoly::monomial(R, g, R.one()), *gb);
      Identity id;
      id.a.assign(dv.cofactors.begin(), dv.cofactors.begin() + n + 1);
      id.c = dv.cofactors[n + 1];
      if (pole > 0) id.coords.assign(basis_.dimension(), 0);
      for (const auto& [t, c] : dv.remainder.terms()) {
        auto it = slots.find(t);
        if (pole == 0 || it == slots.end()) {
          ok = false;
          break;
        }
        id.coords[it->second] = c;
      }
      if (!ok) break;
      ids.push_back(std::move(id));
    }
  }
  methods_[degree] = ok ? Method::groebner : Method::linear;
  if (!ok) ids = linear_identities(spec_, basis_, R, degree, pole);
  for (Identity& id : ids) {
    id.next = derivative_sum(id.a, R, nv, degree - spec_.d);
    if (pole > 0) {
      if (pole > 1 && !id.c.is_zero()) id.next += id.c.scaled(R.from_int(pole - 1));
      // only the derivative image is needed from here on
      id.a.clear();
      id.c = ModPoly(R, nv, degree - spec_.d);
    }
  }
  return ids;
}

// ---- sparse path

StepResult reduce_pole_step(const ReductionState& st, const ReductionTables& tables) {
  const int m = st.pole;
  if (m < 2) throw std::invalid_argument("reduce_pole_step needs pole order >= 2");
  const ResidueRing& R = tables.ring();
  const HypersurfaceSpec& spec = tables.spec();
  const int nv = spec.nvars();
  const int e = tables.degree_at(m);
  if (st.numerator.degree() != e) throw std::invalid_argument("numerator degree does not match pole");
  StepResult out;
  out.captured.assign(tables.basis().dimension(), 0);
  ModPoly next(R, nv, e - spec.d);
  const u64 mm1 = R.from_int(m - 1);
  for (const auto& [g, c] : st.numerator.terms()) {
    if (tables.is_high(m)) {
      Monomial b = greedy_divisor(g, tables.socle());
      Monomial delta = g / b;
      const Identity& id = tables.high(b);
      next += id.next.times_monomial(delta, c);
      next += id.c.times_monomial(delta, R.mul(c, mm1));
      for (int i = 0; i < nv; ++i) {
        if (delta[i] == 0) continue;
        Monomial di = delta;
        di.set(i, delta[i] - 1);
        next += id.a[i].times_monomial(di, R.mul(c, R.from_int(delta[i])));
      }
    } else {
      const Identity& id = tables.low(m, g);
      next += id.next.scaled(c);
      for (std::size_t k = 0; k < id.coords.size(); ++k)
        out.captured[k] = R.add(out.captured[k], R.mul(c, id.coords[k]));
    }
  }
  out.state.pole = m - 1;
  out.state.numerator = std::move(next);
  out.state.ledger = st.ledger * (m - 1);
  return out;
}

std::vector<u64> capture_pole_one(const ReductionState& st, const ReductionTables& tables) {
  if (st.pole != 1) throw std::invalid_argument("capture needs pole order 1");
  const ResidueRing& R = tables.ring();
  std::vector<u64> x(tables.basis().dimension(), 0);
  if (st.numerator.is_zero()) return x;
  for (const auto& [g, c] : st.numerator.terms()) {
    const Identity& id = tables.low(1, g);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = R.add(x[k], R.mul(c, id.coords[k]));
  }
  return x;
}

namespace {

int top_pole_of(const std::vector<PoleTerm>& terms) {
  int top = 1;
  for (const auto& t : terms) top = std::max(top, t.pole);
  return top;
}

ReducedClass finish(const std::vector<u64>& X, const BigInt& ledger, const ResidueRing& R,
                    int scale_shift, int top) {
  int v = vp(ledger, R.prime());
  BigInt unit = ledger;
  for (int k = 0; k < v; ++k) unit /= R.prime();
  u64 u = R.from_big(unit);
  ReducedClass rc;
  rc.top_pole = top;
  rc.certified = scale_shift + R.precision() - v;
  for (u64 x : X) {
    ScaledResidue s = ScaledResidue::from_residue(R.prime(), x, R.precision(), scale_shift);
    rc.coords.push_back(divide_tracked(s, v, u));
  }
  return rc;
}

u64 term_scalar(const PoleTerm& t, const BigInt& ledger, const ResidueRing& R) {
  if (t.p_shift >= R.precision()) return 0;
  u64 s = R.mul(R.from_big(ledger), R.mul(ipow(R.prime(), t.p_shift) % R.modulus(), t.unit % R.modulus()));
  return s;
}

}  // namespace

ReducedClass reduce_to_basis_sparse(const std::vector<PoleTerm>& terms, const ReductionTables& tables,
                                    int scale_shift) {
  const ResidueRing& R = tables.ring();
  const int top = top_pole_of(terms);
  const int nv = tables.spec().nvars();
  ReductionState st;
  st.pole = top;
  st.numerator = ModPoly(R, nv, tables.degree_at(top));
  std::vector<u64> X(tables.basis().dimension(), 0);
  for (int m = top; m >= 1; --m) {
    for (const auto& t : terms) {
      if (t.pole != m) continue;
      u64 s = term_scalar(t, st.ledger, R);
      if (s == 0) continue;
      st.numerator += change_precision(*t.numerator, R).times_monomial(t.multiplier, s);
    }
    if (m == 1) {
      if (tables.degree_at(1) >= 0) {
        auto c = capture_pole_one(st, tables);
        for (std::size_t k = 0; k < X.size(); ++k) X[k] = R.add(X[k], c[k]);
      }
      break;
    }
    StepResult r = reduce_pole_step(st, tables);
    const u64 mm1 = R.from_int(m - 1);
    for (std::size_t k = 0; k < X.size(); ++k) X[k] = R.mul(mm1, R.add(X[k], r.captured[k]));
    st = std::move(r.state);
  }
  return finish(X, st.ledger, R, scale_shift, top);
}

// ---- dense path

namespace {

// Dense array over the exponents of x1..xn for monomials of degree <= side-1;
// x0 is implied by the degree, so its stride is 0.
struct ExpBox {
  int nv = 0;
  std::vector<u64> stride;
  u64 size = 1;
  ExpBox(int nvars, int max_degree) : nv(nvars), stride(nvars, 0) {
    u64 s = 1;
    for (int i = 1; i < nvars; ++i) {
      stride[i] = s;
      s *= static_cast<u64>(max_degree + 1);
    }
    size = s;
  }
  u64 index(const Monomial& m) const {
    u64 k = 0;
    for (int i = 1; i < nv; ++i) k += stride[i] * static_cast<u64>(m[i]);
    return k;
  }
};

using Sparse = std::vector<std::pair<u64, u64>>;

Sparse to_sparse(const ModPoly& f, const ExpBox& box) {
  Sparse s;
  s.reserve(f.size());
  for (const auto& [m, c] : f.terms()) s.emplace_back(box.index(m), c);
  return s;
}

class Accumulator {
 public:
  explicit Accumulator(const ResidueRing& R) : R_(R), mod_(R.modulus()), lazy_(R.small_modulus()) {
    limit_ = lazy_ ? ~u64(0) - mod_ * mod_ : 0;
  }
  // slot += a*b; slots hold unreduced sums below limit in lazy mode
  void add(u64& slot, u64 a, u64 b) const {
    if (lazy_) {
      slot += a * b;
      if (slot >= limit_) slot %= mod_;
    } else {
      slot = R_.add(slot, R_.mul(a, b));
    }
  }
  u64 value(u64 slot) const { return lazy_ ? slot % mod_ : slot; }

 private:
  const ResidueRing& R_;
  u64 mod_;
  u64 limit_;
  bool lazy_;
};

// visit all monomials of degree e as (exponents, box index)
template <class F>
void for_each_monomial(int nv, int e, const ExpBox& box, F&& f) {
  std::vector<int> g(nv, 0);
  g[0] = e;
  u64 idx = 0;
  int sum = 0;  // exponents of x1..xn
  for (;;) {
    g[0] = e - sum;
    f(g, idx);
    int i = 1;
    for (; i < nv; ++i) {
      if (sum < e) {
        ++g[i];
        ++sum;
        idx += box.stride[i];
        break;
      }
      sum -= g[i];
      idx -= box.stride[i] * static_cast<u64>(g[i]);
      g[i] = 0;
    }
    if (i == nv) break;
  }
}

}  // namespace

ReducedClass reduce_to_basis(const std::vector<PoleTerm>& terms, const ReductionTables& tables,
                             int scale_shift) {
  const ResidueRing& R = tables.ring();
  const HypersurfaceSpec& spec = tables.spec();
  const int nv = spec.nvars();
  const int e0 = tables.socle();
  const int top = top_pole_of(terms);
  const int etop = std::max(tables.degree_at(top), 0);
  const std::size_t D = tables.basis().dimension();
  ExpBox box(nv, etop);
  ExpBox sbox(nv, e0);
  Accumulator acc(R);

  // high identities in box coordinates
  const auto& hids = tables.high();
  const auto& hmonos = tables.high_monomials();
  std::vector<u64> beta_idx(hids.size());
  std::vector<Sparse> hE(hids.size()), hC(hids.size());
  std::vector<std::vector<Sparse>> hA(hids.size());
  std::vector<std::int32_t> slot_to_id(sbox.size, -1);
  bool need_high = tables.is_high(top);
  if (need_high) {
    for (std::size_t k = 0; k < hids.size(); ++k) {
      beta_idx[k] = box.index(hmonos[k]);
      slot_to_id[sbox.index(hmonos[k])] = static_cast<std::int32_t>(k);
      hE[k] = to_sparse(hids[k].next, box);
      hC[k] = to_sparse(hids[k].c, box);
      for (const auto& a : hids[k].a) hA[k].push_back(to_sparse(a, box));
    }
  }

  std::vector<u64> cur(box.size, 0), next(box.size, 0);
  std::vector<u64> X(D, 0);
  BigInt ledger = 1;
  std::vector<Sparse> merged(hids.size());

  for (int m = top; m >= 1; --m) {
    const int e = tables.degree_at(m);
    for (const auto& t : terms) {
      if (t.pole != m) continue;
      u64 s = term_scalar(t, ledger, R);
      if (s == 0) continue;
      u64 base = box.index(t.multiplier);
      for (const auto& [mono, c] : t.numerator->terms()) acc.add(cur[base + box.index(mono)], s, c % R.modulus());
    }
    if (m == 1 && e < 0) break;
    if (e < 0) {
      for (auto& x : X) x = R.mul(x, R.from_int(m - 1));
      ledger *= (m - 1);
      continue;
    }
    if (m == 1) {
      const auto& monos = tables.low_monomials(1);
      const auto& ids = tables.low(1);
      for (std::size_t k = 0; k < monos.size(); ++k) {
        u64 c = acc.value(cur[box.index(monos[k])]);
        if (c == 0) continue;
        for (std::size_t b = 0; b < D; ++b) X[b] = R.add(X[b], R.mul(c, ids[k].coords[b]));
      }
      break;
    }
    const u64 mm1 = R.from_int(m - 1);
    if (tables.is_high(m)) {
      // E + (m-1) C for this pole
      for (std::size_t k = 0; k < hids.size(); ++k) {
        ModPoly ec = hids[k].next + hids[k].c.scaled(mm1);
        merged[k] = to_sparse(ec, box);
      }
      for_each_monomial(nv, e, box, [&](const std::vector<int>& g, u64 idx) {
        u64 c = acc.value(cur[idx]);
        cur[idx] = 0;
        if (c == 0) return;
        int rem = e0;
        u64 bslot = 0;
        int b[kMaxVars];
        for (int i = 0; i < nv; ++i) {
          b[i] = std::min(g[i], rem);
          rem -= b[i];
          bslot += sbox.stride[i] * static_cast<u64>(b[i]);
        }
        const std::int32_t id = slot_to_id[bslot];
        const u64 base = idx - beta_idx[id];
        for (const auto& [off, v] : merged[id]) acc.add(next[base + off], c, v);
        for (int i = 0; i < nv; ++i) {
          const int di = g[i] - b[i];
          if (di == 0) continue;
          const u64 f = R.mul(c, static_cast<u64>(di) % R.modulus());
          const u64 bi = base - box.stride[i];
          for (const auto& [off, v] : hA[id][i]) acc.add(next[bi + off], f, v);
        }
      });
    } else {
      const auto& monos = tables.low_monomials(m);
      const auto& ids = tables.low(m);
      for (std::size_t k = 0; k < monos.size(); ++k) {
        u64& slot = cur[box.index(monos[k])];
        u64 c = acc.value(slot);
        slot = 0;
        if (c == 0) continue;
        for (const auto& [mono, v] : ids[k].next.terms()) acc.add(next[box.index(mono)], c, v);
        for (std::size_t b = 0; b < D; ++b)
          if (ids[k].coords[b]) X[b] = R.add(X[b], R.mul(c, ids[k].coords[b]));
      }
    }
    for (auto& x : X) x = R.mul(x, mm1);
    ledger *= (m - 1);
    std::swap(cur, next);
  }
  return finish(X, ledger, R, scale_shift, top);
}

double reduction_workspace_bytes(int n, int d, int top_pole) {
  double side = std::max(top_pole * d - n - 1, 0) + 1.0;
  double cells = 1;
  for (int i = 0; i < n; ++i) cells *= side;
  return 2.0 * 8.0 * cells;
}

}  // namespace hfrob
