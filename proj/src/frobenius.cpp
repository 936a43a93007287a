#include "hfrob/frobenius.hpp"

#include "hfrob/errors.hpp"
#include "hfrob/linalg_fp.hpp"

#include <atomic>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace hfrob {

DeltaPowers::DeltaPowers(const HypersurfaceSpec& spec, int w, int jmax) {
  ResidueRing R(spec.p, w);
  pw_.push_back(std::make_shared<const ModPoly>(one_poly(R, spec.nvars())));
  if (jmax < 1) return;
  ModPoly delta = compute_delta_mod(spec.lift, spec.p, w);
  pw_.push_back(std::make_shared<const ModPoly>(delta));
  for (int j = 2; j <= jmax; ++j) pw_.push_back(std::make_shared<const ModPoly>(multiply(*pw_.back(), delta)));
}

std::vector<FrobTerm> frobenius_image(const HypersurfaceSpec& spec, const BasisElement& b, int jmax,
                                      const DeltaPowers& delta, const ResidueRing& R) {
  const int p = static_cast<int>(spec.p);
  Monomial mult = b.mono.scaled(p);
  for (int i = 0; i < spec.nvars(); ++i) mult.set(i, mult[i] + p - 1);
  std::vector<FrobTerm> out;
  BigInt binom = 1;  // binom(-h, j)
  for (int j = 0; j <= jmax; ++j) {
    if (j > 0) binom = binom * -(b.pole + j - 1) / j;
    FrobTerm t;
    t.j = j;
    t.term.pole = p * (b.pole + j);
    t.term.numerator = delta[j];
    t.term.multiplier = mult;
    int v = vp(binom, spec.p);
    BigInt u = binom;
    for (int k = 0; k < v; ++k) u /= spec.p;
    t.term.p_shift = j + v;
    t.term.unit = R.from_big(u);
    out.push_back(std::move(t));
  }
  return out;
}

FrobeniusSetup plan_frobenius(const HypersurfaceSpec& spec, const CohomologyBasis& basis, int r,
                              const AssembleOptions& opt) {
  FrobeniusSetup st;
  st.plan = choose_working_precision(r, spec.n, spec.p);
  if (opt.s_override > 0) {
    st.heuristic = true;
    st.plan.s = opt.s_override;
    st.plan.j_max = opt.s_override - spec.n;
  }
  st.jmax = std::max(st.plan.j_max, 0);
  const int h_max = basis.max_pole();
  st.w = arithmetic_precision(st.plan, h_max);
  st.top_pole = static_cast<int>(spec.p) * (h_max + st.jmax);
  return st;
}

FrobMatrix assemble_matrix(const HypersurfaceSpec& spec, const CohomologyBasis& basis,
                           const FrobeniusSetup& setup, const ReductionTables& tables,
                           const AssembleOptions& opt) {
  if (tables.ring().precision() != setup.w) throw std::invalid_argument("tables built at the wrong precision");
  const ResidueRing& R = tables.ring();
  const std::size_t D = basis.dimension();
  const int r = setup.plan.r;
  DeltaPowers delta(spec, setup.w, setup.jmax);

  std::vector<ReducedClass> cols(D);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= D) return;
      try {
        auto image = frobenius_image(spec, basis[k], setup.jmax, delta, R);
        std::vector<PoleTerm> terms;
        for (auto& t : image) terms.push_back(std::move(t.term));
        cols[k] = reduce_to_basis(terms, tables, spec.n - 1);
      } catch (...) {
        std::lock_guard<std::mutex> lk(fail_mu);
        if (!failure) failure = std::current_exception();
        next = D;
        return;
      }
    }
  };
  int nw = std::max(1, std::min<int>(opt.workers, static_cast<int>(D)));
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  FrobMatrix M;
  M.p = spec.p;
  M.n = spec.n;
  M.r = r;
  M.D = D;
  M.entries.assign(D * D, 0);
  M.labels = basis.elements();
  M.heuristic = setup.heuristic;
  M.s = setup.plan.s;
  M.w = setup.w;
  M.lift = to_string(spec.lift, spec.var_names);
  M.certified = 1 << 20;
  int shift = 0;
  for (std::size_t k = 0; k < D; ++k) {
    M.certified = std::min(M.certified, cols[k].certified);
    if (cols[k].certified < r)
      throw PrecisionExhausted("column " + std::to_string(k) + " is certified to " +
                               std::to_string(cols[k].certified) + " digits, fewer than " + std::to_string(r));
    for (const ScaledResidue& c : cols[k].coords)
      if (!c.is_zero() && c.valuation() < r) shift = std::max(shift, -c.valuation());

  }
  M.shift = shift;
  const ScaledResidue ps = ScaledResidue::from_residue(spec.p, 1, r + shift + 1, shift);
  for (std::size_t k = 0; k < D; ++k)
    for (std::size_t i = 0; i < D; ++i) {
      const ScaledResidue c = cols[k].coords[i] * ps;
      M.at(i, k) = c.residue(r + shift);
    }
  return M;
}

int rank_mod_p(const FrobMatrix& m) {
  FpEchelon e(m.p, m.D);
  for (std::size_t i = 0; i < m.D; ++i) {
    std::vector<u64> row(m.D);
    for (std::size_t j = 0; j < m.D; ++j) row[j] = m.at(i, j) % m.p;
    e.insert(std::move(row));
  }
  return static_cast<int>(e.rank());
}

u64 trace_mod(const FrobMatrix& m) {
  ResidueRing R = m.ring();
  u64 t = 0;
  for (std::size_t i = 0; i < m.D; ++i) t = R.add(t, m.at(i, i));
  return t;
}

void write_matrix(std::ostream& os, const FrobMatrix& m, const std::vector<std::string>& names) {
  os << "hfrob-matrix 1\n";
  os << "p " << m.p << "\nn " << m.n << "\nr " << m.r << "\nD " << m.D << "\n";
  os << "shift " << m.shift << "\n";
  os << "s " << m.s << "\nw " << m.w << "\n";
  os << "heuristic " << (m.heuristic ? 1 : 0) << "\n";
  os << "basis\n";
  for (const auto& b : m.labels) {
    os << b.pole;
    for (int i = 0; i < b.mono.nvars(); ++i) os << " " << b.mono[i];
    os << "  # " << monomial_to_string(b.mono, names) << "\n";
  }
  os << "entries\n";
  for (std::size_t i = 0; i < m.D; ++i) {
    for (std::size_t j = 0; j < m.D; ++j) os << (j ? " " : "") << m.at(i, j);
    os << "\n";
  }
}

FrobMatrix read_matrix(std::istream& is) {
  FrobMatrix m;
  std::string tok, ver;
  is >> tok >> ver;
  if (tok != "hfrob-matrix" || ver != "1") throw InputError("not a matrix file");
  auto field = [&](const char* name) {
    std::string k;
    is >> k;
    if (k != name) throw InputError(std::string("matrix file: expected ") + name);
  };
  int heur = 0;
  field("p");
  is >> m.p;
  field("n");
  is >> m.n;
  field("r");
  is >> m.r;
  field("D");
  is >> m.D;
  field("shift");
  is >> m.shift;
  field("s");
  is >> m.s;
  field("w");
  is >> m.w;
  field("heuristic");
  is >> heur;
  m.heuristic = heur != 0;
  field("basis");
  for (std::size_t k = 0; k < m.D; ++k) {
    BasisElement b;
    is >> b.pole;
    std::vector<int> e(m.n + 1);
    for (int& x : e) is >> x;
    b.mono = Monomial::from_vector(e);
    std::string rest;
    std::getline(is, rest);
    m.labels.push_back(b);
  }
  field("entries");
  m.entries.resize(m.D * m.D);
  for (auto& x : m.entries) is >> x;
  if (!is) throw InputError("truncated matrix file");
  m.certified = m.r;
  return m;
}

}  // namespace hfrob
