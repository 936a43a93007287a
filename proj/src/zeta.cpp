#include "hfrob/zeta.hpp"

#include "hfrob/errors.hpp"
#include "hfrob/spectral.hpp"

#include <atomic>
#include <mutex>
#include <thread>

namespace hfrob {

namespace {

using Poly = std::vector<u64>;  // ascending, over F_p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a modulo monic b
Poly poly_mod(Poly a, const Poly& b, u64 p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  while (a.size() > db) {
    u64 c = a.back();
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] = (a[shift + j] + (p - c) * b[j]) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), f, p);
}

Poly decode(u64 x, u64 p, int deg) {
  Poly a(deg, 0);
  for (int k = 0; k < deg; ++k) {
    a[k] = x % p;
    x /= p;
  }
  trim(a);
  return a;
}

u64 encode(const Poly& a, u64 p) {
  u64 x = 0;
  for (std::size_t k = a.size(); k-- > 0;) x = x * p + a[k];
  return x;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_irreducible(const std::vector<u64>& f, u64 p) {
  const int deg = static_cast<int>(f.size()) - 1;
  if (deg <= 0) return false;
  if (deg == 1) return true;
  for (int dg = 1; dg <= deg / 2; ++dg) {
    const u64 count = ipow(p, dg);
    for (u64 low = 0; low < count; ++low) {
      Poly g = decode(low, p, dg);
      g.resize(dg + 1, 0);
      g[dg] = 1;
      if (poly_mod(f, g, p).empty()) return false;
    }
  }
  return true;
}

std::vector<u64> first_irreducible(u64 p, int degree) {
  if (degree < 1) throw std::invalid_argument("extension degree must be positive");
  // monic candidates ordered by (a_{i-1}, ..., a_0) read as a base-p number
  const u64 count = ipow(p, degree);
  for (u64 low = 0; low < count; ++low) {
    Poly f = decode(low, p, degree);
    f.resize(degree + 1, 0);
    f[degree] = 1;
    if (is_irreducible(f, p)) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

FieldExt::FieldExt(u64 p, int degree) : p_(p), i_(degree) {
  q_ = ipow(p, degree);
  if (q_ > (u64(1) << 26)) throw CapExceeded("field of order " + std::to_string(q_) + " is too large for log tables");
  f_ = first_irreducible(p, degree);
  const u64 n = q_ - 1;
  const auto factors = prime_factors(n);
  auto poly_pow = [&](Poly a, u64 e) {
    Poly r{1};
    while (e) {
      if (e & 1) r = poly_mulmod(r, a, f_, p_);
      a = poly_mulmod(a, a, f_, p_);
      e >>= 1;
    }
    return r;
  };
  u64 g = 0;
  for (u64 cand = 1; cand < q_; ++cand) {
    Poly c = decode(cand, p_, i_);
    bool primitive = true;
    for (u64 l : factors)
      if (poly_pow(c, n / l) == Poly{1}) {
        primitive = false;
        break;
      }
    if (primitive) {
      g = cand;
      break;
    }
  }
  if (q_ == 2) g = 1;
  exp_.assign(n, 0);
  log_.assign(q_, kZero);
  Poly gp = decode(g, p_, i_), cur{1};
  for (u64 k = 0; k < n; ++k) {
    u64 e = encode(cur, p_);
    exp_[k] = static_cast<std::uint32_t>(e);
    log_[e] = static_cast<std::uint32_t>(k);
    cur = poly_mulmod(cur, gp, f_, p_);
  }
  zech_.assign(n, kZero);
  for (u64 k = 0; k < n; ++k) {
    u64 e = exp_[k];
    u64 d0 = e % p_;
    u64 e1 = e - d0 + (d0 + 1) % p_;
    zech_[k] = e1 == 0 ? kZero : log_[e1];
  }
}

std::uint32_t FieldExt::add(std::uint32_t a, std::uint32_t b) const {
  if (a == 0) return b;
  if (b == 0) return a;
  const u64 n = q_ - 1;
  u64 la = log_[a], lb = log_[b];
  std::uint32_t z = zech_[(lb + n - la) % n];
  if (z == kZero) return 0;
  return exp_[(la + z) % n];
}

std::uint32_t FieldExt::mul(std::uint32_t a, std::uint32_t b) const {
  if (a == 0 || b == 0) return 0;
  return exp_[(static_cast<u64>(log_[a]) + log_[b]) % (q_ - 1)];
}

std::uint32_t FieldExt::pow(std::uint32_t a, u64 e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[static_cast<u64>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
}

namespace {

struct Term {
  std::uint32_t clog;
  std::vector<int> e;
};

// sum of Zech-log terms in the log domain; kZero encodes 0
struct LogAcc {
  const FieldExt& F;
  std::uint32_t v = FieldExt::kZero;
  u64 n;
  explicit LogAcc(const FieldExt& f) : F(f), n(f.order() - 1) {}
  void add(u64 l) {
    if (v == FieldExt::kZero) {
      v = static_cast<std::uint32_t>(l);
      return;
    }
    std::uint32_t z = F.zech(static_cast<std::uint32_t>((l + n - v) % n));
    v = z == FieldExt::kZero ? FieldExt::kZero : static_cast<std::uint32_t>((v + z) % n);
  }
};

}  // namespace

u64 count_points(const HypersurfaceSpec& spec, int i, const CountOptions& opt) {
  if (i < 1) throw std::invalid_argument("extension degree must be positive");
  const u64 p = spec.p;
  const int N = spec.n;
  {
    long double cand = 1;
    for (int k = 0; k < i * N; ++k) cand *= p;
    if (cand > static_cast<long double>(opt.cap))
      throw CapExceeded("point count over F_" + std::to_string(p) + "^" + std::to_string(i) +
                        " needs " + std::to_string(p) + "^" + std::to_string(i * N) + " candidates, above the cap");
  }
  FieldExt F(p, i);
  const u64 q = F.order(), nq = q - 1;
  std::vector<Term> terms;
  for (const auto& [m, c] : spec.P.terms()) {
    Term t;
    t.clog = F.log(F.embed(c));
    t.e = m.exponents();
    terms.push_back(std::move(t));
  }

  // stratum k: x_0..x_{k-1} = 0, x_k = 1, the rest free; the free
  // coordinates are enumerated as logs with kZero for 0
  std::atomic<u64> total{0};
  struct Job {
    int k;
    u64 first;  // value of x_{k+1}, or 0 when k == N
  };
  std::vector<Job> jobs;
  for (int k = 0; k <= N; ++k) {
    if (k == N) {
      jobs.push_back({k, 0});
      continue;
    }
    for (u64 v = 0; v < q; ++v) jobs.push_back({k, v});
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    std::vector<std::uint32_t> x(N + 1);
    std::vector<const Term*> live;
    for (;;) {
      std::size_t jid = next.fetch_add(1);
      if (jid >= jobs.size()) return;
      const Job job = jobs[jid];
      const int k = job.k;
      live.clear();
      for (const Term& t : terms) {
        bool zero = false;
        for (int j = 0; j < k; ++j) zero = zero || t.e[j] > 0;
        if (!zero) live.push_back(&t);
      }
      for (int j = 0; j < k; ++j) x[j] = FieldExt::kZero;
      x[k] = 0;  // log of 1
      u64 local = 0;
      if (k == N) {
        LogAcc acc(F);
        for (const Term* t : live) acc.add(t->clog);
        total += acc.v == FieldExt::kZero ? 1 : 0;
        continue;
      }
      x[k + 1] = job.first == 0 ? FieldExt::kZero : F.log(static_cast<std::uint32_t>(job.first));
      // odometer over x_{k+2..N}, each in {kZero, 0, ..., q-2}
      const int lo = k + 2;
      for (int j = lo; j <= N; ++j) x[j] = FieldExt::kZero;
      for (;;) {
        LogAcc acc(F);
        for (const Term* t : live) {
          u64 l = t->clog;
          bool zero = false;
          for (int j = k + 1; j <= N; ++j) {
            if (t->e[j] == 0) continue;
            if (x[j] == FieldExt::kZero) {
              zero = true;
              break;
            }
            l += static_cast<u64>(t->e[j]) * x[j];
          }
          if (!zero) acc.add(l % nq);
        }
        if (acc.v == FieldExt::kZero) ++local;
        int j = N;
        for (; j >= lo; --j) {
          if (x[j] == FieldExt::kZero) {
            x[j] = 0;
            break;
          }
          if (x[j] + 1 < nq) {
            ++x[j];
            break;
          }
          x[j] = FieldExt::kZero;
        }
        if (j < lo) break;
      }
      total += local;
    }
  };
  const int nw = std::max(1, opt.workers);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return total;
}

std::vector<TraceVerdict> trace_consistency(const FrobMatrix& M, const std::vector<u64>& counts) {
  const ResidueRing R = M.ring();
  const ResidueMatrix A = to_residue_matrix(M);
  ResidueMatrix Ai = A;
  std::vector<TraceVerdict> out;
  for (std::size_t idx = 0; idx < counts.size(); ++idx) {
    const int i = static_cast<int>(idx) + 1;
    if (i > 1) Ai = Ai * A;
    u64 trN = 0;
    for (std::size_t k = 0; k < M.D; ++k) trN = R.add(trN, Ai(k, k));
    // Tr(M^i) = p^(-i shift) Tr((p^shift M)^i)
    const int down = i * M.shift;
    const int prec = M.r + M.shift - down;
    TraceVerdict v;
    v.i = i;
    v.count = counts[idx];
    v.precision = std::max(prec, 0);
    if (prec <= 0) {
      v.ok = true;
      out.push_back(v);
      continue;
    }
    if (R.valuation(trN) < down) {
      out.push_back(v);
      continue;
    }
    const ResidueRing Rp(M.p, prec);
    const u64 tr = R.shift_down(trN, down) % Rp.modulus();
    BigInt base = 0, qi = 1;
    for (int t = 0; t < i; ++t) qi *= M.p;
    BigInt pw = 1;
    for (int k = 0; k < M.n; ++k) {
      base += pw;
      pw *= qi;
    }
    u64 pred = Rp.from_big(base);
    pred = (M.n - 1) % 2 == 0 ? Rp.add(pred, tr) : Rp.sub(pred, tr);
    v.predicted = pred;
    v.ok = Rp.from_big(BigInt(counts[idx])) == pred;
    out.push_back(v);
  }
  return out;
}

std::vector<BigInt> curve_charpoly_from_counts(u64 p, int genus, const std::vector<u64>& counts) {
  if (static_cast<int>(counts.size()) < genus) throw std::invalid_argument("need counts over F_p..F_{p^g}");
  const int g = genus;
  // power sums of the Frobenius eigenvalues
  std::vector<BigInt> s(g + 1, 0);
  BigInt q = 1;
  for (int k = 1; k <= g; ++k) {
    q *= p;
    s[k] = 1 + q - BigInt(counts[k - 1]);
  }
  std::vector<BigInt> e(2 * g + 1, 0);
  e[0] = 1;
  for (int k = 1; k <= g; ++k) {
    BigInt acc = 0;
    for (int j = 1; j <= k; ++j) acc += ((j % 2) ? 1 : -1) * e[k - j] * s[j];
    if (acc % k != 0) throw std::runtime_error("counts are inconsistent with a curve of this genus");
    e[k] = acc / k;
  }
  for (int k = 0; k < g; ++k) {
    BigInt pw = 1;
    for (int t = 0; t < g - k; ++t) pw *= p;
    e[2 * g - k] = pw * e[k];
  }
  std::vector<BigInt> asc(2 * g + 1, 0);
  for (int k = 0; k <= 2 * g; ++k) asc[2 * g - k] = (k % 2 ? -1 : 1) * e[k];
  return asc;
}

}  // namespace hfrob
