#include "hfrob/spectral.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <stdexcept>

namespace hfrob {

ResidueMatrix ResidueMatrix::identity(ResidueRing R, std::size_t n) {
  ResidueMatrix I(R, n, n);
  for (std::size_t i = 0; i < n; ++i) I(i, i) = R.one();
  return I;
}

ResidueMatrix to_residue_matrix(const FrobMatrix& m) {
  ResidueMatrix A(m.ring(), m.D, m.D);
  A.a = m.entries;
  return A;
}

ResidueMatrix operator*(const ResidueMatrix& x, const ResidueMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matrix shape mismatch");
  const ResidueRing& R = x.ring;
  ResidueMatrix z(R, x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      u64 a = x(i, k);
      if (a == 0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) z(i, j) = R.add(z(i, j), R.mul(a, y(k, j)));
    }
  return z;
}

ResidueMatrix minus_scalar(const ResidueMatrix& A, u64 c) {
  ResidueMatrix B = A;
  for (std::size_t i = 0; i < std::min(A.rows, A.cols); ++i) B(i, i) = A.ring.sub(A(i, i), c % A.ring.modulus());
  return B;
}

namespace {

struct Pivoting {
  ResidueMatrix A;
  std::vector<std::size_t> rows, cols;  // active indices
  explicit Pivoting(const ResidueMatrix& m) : A(m) {
    for (std::size_t i = 0; i < m.rows; ++i) rows.push_back(i);
    for (std::size_t j = 0; j < m.cols; ++j) cols.push_back(j);
  }
  // position (in the active lists) of a least-valuation nonzero entry, or false
  bool find(std::size_t* ri, std::size_t* ci, int* v) const {
    int best = A.ring.precision();
    bool found = false;
    for (std::size_t a = 0; a < rows.size() && best > 0; ++a)
      for (std::size_t b = 0; b < cols.size(); ++b) {
        u64 x = A(rows[a], cols[b]);
        if (x == 0) continue;
        int w = A.ring.valuation(x);
        if (w < best) {
          best = w;
          *ri = a;
          *ci = b;
          found = true;
          if (w == 0) break;
        }
      }
    *v = best;
    return found;
  }
  // Schur complement on the pivot, then drop its row and column
  void eliminate(std::size_t ri, std::size_t ci, int v) {
    const ResidueRing& R = A.ring;
    const std::size_t pr = rows[ri], pc = cols[ci];
    int vv = 0;
    u64 inv = R.inverse_or_throw(R.unit_part(A(pr, pc), &vv));
    for (std::size_t a = 0; a < rows.size(); ++a) {
      if (a == ri) continue;
      const std::size_t i = rows[a];
      u64 x = A(i, pc);
      if (x == 0) continue;
      u64 q = R.mul(R.shift_down(x, v), inv);
      for (std::size_t j : cols) A(i, j) = R.sub(A(i, j), R.mul(q, A(pr, j)));
    }
    rows.erase(rows.begin() + static_cast<long>(ri));
    cols.erase(cols.begin() + static_cast<long>(ci));
  }
};

}  // namespace

int corank_upper_bound(const ResidueMatrix& A) {
  Pivoting P(A);
  for (;;) {
    std::size_t ri = 0, ci = 0;
    int v = 0;
    if (!P.find(&ri, &ci, &v)) return static_cast<int>(P.cols.size());
    P.eliminate(ri, ci, v);
  }
}

DetApprox det_product_approx(const ResidueMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("determinant of a non-square matrix");
  const ResidueRing& R = A.ring;
  const u64 p = R.prime();
  const int m = R.precision();
  Pivoting P(A);
  ScaledResidue value = ScaledResidue::from_residue(p, R.one(), m);
  bool negative = false;
  int sum_v = 0, min_gap = m;
  while (!P.rows.empty()) {
    std::size_t ri = 0, ci = 0;
    int v = 0;
    if (!P.find(&ri, &ci, &v)) throw std::domain_error("corank bound is nonzero");
    if ((ri + ci) % 2 == 1) negative = !negative;
    u64 a = P.A(P.rows[ri], P.cols[ci]);
    int vv = 0;
    u64 u = R.unit_part(a, &vv);
    value = value * ScaledResidue::from_residue(p, u, m - v, v);
    sum_v += v;
    min_gap = std::min(min_gap, m - v);
    P.eliminate(ri, ci, v);
  }
  if (negative) value = -value;
  return {value, min_gap + sum_v};
}

UniPoly charpoly_mod(const ResidueMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  const ResidueRing& R = A.ring;
  const std::size_t n = A.rows;
  std::vector<u64> vec{R.one()};  // descending coefficients
  for (std::size_t r = 0; r < n; ++r) {
    // Toeplitz column: 1, -a, -C R, -C A_r R, ..., -C A_r^{r-1} R
    std::vector<u64> t(r + 2, 0);
    t[0] = R.one();
    t[1] = R.neg(A(r, r));
    std::vector<u64> v(r), w(r);
    for (std::size_t i = 0; i < r; ++i) v[i] = A(i, r);
    for (std::size_t k = 0; k < r; ++k) {
      u64 s = 0;
      for (std::size_t i = 0; i < r; ++i) s = R.add(s, R.mul(A(r, i), v[i]));
      t[k + 2] = R.neg(s);
      if (k + 1 == r) break;
      for (std::size_t i = 0; i < r; ++i) {
        u64 acc = 0;
        for (std::size_t j = 0; j < r; ++j) acc = R.add(acc, R.mul(A(i, j), v[j]));
        w[i] = acc;
      }
      std::swap(v, w);
    }
    std::vector<u64> nv(r + 2, 0);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) nv[i] = R.add(nv[i], R.mul(t[i - j], vec[j]));
    vec = std::move(nv);
  }
  std::vector<u64> asc(vec.rbegin(), vec.rend());
  return UniPoly(R, asc);
}

u64 euler_phi(u64 n) {
  if (n == 0) return 0;
  u64 result = n;
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    while (n % q == 0) n /= q;
    result -= result / q;
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<int> enumerate_cyclotomic_levels(int B) {
  if (B < 1) throw std::invalid_argument("bound must be positive");
  // phi(n) >= n / (floor(log2 n) + 1), and the right side is >= 2^k/(k+1)
  // on [2^k, 2^(k+1)); stop at the first 2^k where that exceeds B
  int k = 1;
  while ((1LL << k) <= static_cast<long long>(B) * (k + 1)) ++k;
  std::vector<int> out;
  for (long long n = 1; n < (1LL << k); ++n)
    if (euler_phi(static_cast<u64>(n)) <= static_cast<u64>(B)) out.push_back(static_cast<int>(n));
  return out;
}

namespace {

std::vector<BigInt> cyclotomic_memo(int n, std::map<int, std::vector<BigInt>>& memo) {
  auto it = memo.find(n);
  if (it != memo.end()) return it->second;
  // T^n - 1 divided by Phi_d for the proper divisors d
  std::vector<BigInt> f(n + 1, 0);
  f[0] = -1;
  f[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d) continue;
    std::vector<BigInt> g = cyclotomic_memo(d, memo);
    const int dg = static_cast<int>(g.size()) - 1;
    const int df = static_cast<int>(f.size()) - 1;
    std::vector<BigInt> q(df - dg + 1, 0);
    for (int i = df; i >= dg; --i) {
      BigInt c = f[i];
      q[i - dg] = c;
      if (c == 0) continue;
      for (int j = 0; j <= dg; ++j) f[i - dg + j] -= c * g[j];
    }
    f = std::move(q);
  }
  memo.emplace(n, f);
  return f;
}

}  // namespace

std::vector<BigInt> cyclotomic_poly(int n) {
  if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
  std::map<int, std::vector<BigInt>> memo;
  return cyclotomic_memo(n, memo);
}

UniPoly scaled_cyclotomic(int n, const ResidueRing& R, int e) {
  std::vector<BigInt> phi = cyclotomic_poly(n);
  const int deg = static_cast<int>(phi.size()) - 1;
  std::vector<u64> c(deg + 1);
  BigInt pk = 1;
  for (int k = deg; k >= 0; --k) {
    c[k] = R.from_big(phi[k] * pk);
    for (int t = 0; t < e; ++t) pk *= R.prime();
  }
  return UniPoly(R, c);
}

int cyclotomic_multiplicity_bound(const UniPoly& C, int n, int e) {
  UniPoly psi = scaled_cyclotomic(n, C.ring(), e);
  UniPoly cur = C;
  int k = 0;
  while (!cur.is_zero() && cur.degree() >= psi.degree()) {
    UniPoly q, r;
    cur.divrem(psi, &q, &r);
    if (!r.is_zero()) break;
    ++k;
    cur = q;
  }
  return k;
}

std::vector<int> elementary_divisor_exponents(const ResidueMatrix& A, int* unresolved) {
  Pivoting P(A);
  std::vector<int> out;
  for (;;) {
    std::size_t ri = 0, ci = 0;
    int v = 0;
    if (!P.find(&ri, &ci, &v)) break;
    out.push_back(v);
    P.eliminate(ri, ci, v);
  }
  if (unresolved) *unresolved = static_cast<int>(std::min(P.rows.size(), P.cols.size()));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// largest R with p^R < 2^62
int word_precision(u64 p) {
  int R = 0;
  u64 x = 1;
  while (x <= (u64(1) << 62) / p) {
    x *= p;
    ++R;
  }
  return R - 1;
}

}  // namespace

NormalizedCharpoly normalized_charpoly(const ResidueMatrix& M, int weight_shift) {
  NormalizedCharpoly out;
  out.weight_shift = weight_shift;
  if (M.rows != M.cols || M.rows == 0) {
    out.reason = "empty or non-square matrix";
    return out;
  }
  const u64 p = M.ring.prime();
  const int r = M.ring.precision();
  const int D = static_cast<int>(M.rows);
  const int w = weight_shift;
  int unresolved = 0;
  out.elementary = elementary_divisor_exponents(M, &unresolved);
  if (unresolved > 0) {
    out.reason = "elementary divisors not determined mod p^" + std::to_string(r);
    return out;
  }
  // E[j] = sum of the j smallest exponents: v_p of every j-minor of any lift is >= E[j]
  std::vector<int> E(D + 1, 0);
  for (int j = 1; j <= D; ++j) E[j] = E[j - 1] + out.elementary[j - 1];

  // c_k = (-1)^(D-k) times the sum of (D-k)-minors is known mod p^(r + E[D-k-1])
  const int R = std::min(word_precision(p), r + E[D - 1]);
  ResidueRing big(p, R);
  ResidueMatrix L(big, M.rows, M.cols);
  L.a = M.a;
  const UniPoly C = charpoly_mod(L);

  int a = 0;
  for (int j = 1; j <= D; ++j) a = std::max(a, w * j - E[j]);
  out.content_shift = a;

  // coefficient k of P~ = c_k p^(a - w(D-k)), with its absolute precision
  std::vector<BigInt> val(D + 1);
  std::vector<int> prec(D + 1);
  for (int k = 0; k <= D; ++k) {
    const int j = D - k;
    const int shift = a - w * j;
    if (j == 0) {
      val[k] = 1;
      for (int t = 0; t < a; ++t) val[k] *= p;
      prec[k] = std::numeric_limits<int>::max();
      continue;
    }
    const int known = std::min(R, r + E[j - 1]);
    BigInt c = C.coeff(k);
    int vc = c == 0 ? known : vp(c, p);
    if (vc < std::min(E[j], known)) {
      out.reason = "characteristic polynomial contradicts the elementary divisors";
      return out;
    }
    if (known + shift <= 0) {
      val[k] = 0;
      prec[k] = 0;
      continue;
    }
    if (shift >= 0) {
      for (int t = 0; t < shift; ++t) c *= p;
    } else {
      for (int t = 0; t < -shift; ++t) c /= p;
    }
    val[k] = c;
    prec[k] = known + shift;
  }

  auto reduce = [&](const BigInt& x, int e) {
    BigInt m = 1;
    for (int t = 0; t < e; ++t) m *= p;
    BigInt y = x % m;
    if (y < 0) y += m;
    return y;
  };
  for (int eps : {1, -1}) {
    bool ok = true;
    int uniform = std::numeric_limits<int>::max();
    std::vector<BigInt> v(D + 1);
    std::vector<int> pr(D + 1);
    for (int k = 0; k <= D && ok; ++k) {
      // P~_k = eps P~_{D-k}
      const int k2 = D - k;
      BigInt mirrored = eps * val[k2];
      const int common = std::min(prec[k], prec[k2]);
      if (common != std::numeric_limits<int>::max() && common > 0 && reduce(val[k] - mirrored, common) != 0)
        ok = false;
      if (prec[k] >= prec[k2]) {
        v[k] = val[k];
        pr[k] = prec[k];
      } else {
        v[k] = mirrored;
        pr[k] = prec[k2];
      }
      uniform = std::min(uniform, pr[k]);
    }
    if (!ok) continue;
    if (uniform <= 0) {
      out.reason = "rescaled coefficients carry no precision";
      continue;
    }
    uniform = std::min(uniform, word_precision(p));
    ResidueRing Rq(p, uniform);
    std::vector<u64> coeffs(D + 1);
    for (int k = 0; k <= D; ++k) coeffs[k] = Rq.from_big(v[k]);
    out.precision = uniform;
    out.signs.push_back(eps);
    out.candidates.emplace_back(Rq, coeffs);
  }
  if (out.candidates.empty()) {
    if (out.reason.empty()) out.reason = "no sign of Q(0) is consistent with the data";
    return out;
  }
  out.available = true;
  out.reason.clear();
  return out;
}

int normalized_multiplicity_bound(const NormalizedCharpoly& q, int n) {
  if (!q.available) return -1;
  std::vector<BigInt> phi = cyclotomic_poly(n);
  int best = 0;
  for (const UniPoly& cand : q.candidates) {
    const ResidueRing& R = cand.ring();
    std::vector<u64> c(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) c[i] = R.from_big(phi[i]);
    UniPoly f(R, c), cur = cand;
    int k = 0;
    while (!cur.is_zero() && cur.degree() >= f.degree()) {
      UniPoly qq, rr;
      cur.divrem(f, &qq, &rr);
      if (!rr.is_zero()) break;
      ++k;
      cur = qq;
    }
    best = std::max(best, k);
  }
  return best;
}

int arithmetic_picard_bound(const FrobMatrix& M) {
  ResidueMatrix A = to_residue_matrix(M);
  return 1 + corank_upper_bound(minus_scalar(A, ipow(M.p, 1 + M.shift) % A.ring.modulus()));
}

TateBoundReport geometric_picard_bound(const FrobMatrix& M) {
  ResidueMatrix A = to_residue_matrix(M);
  const ResidueRing& R = A.ring;
  TateBoundReport rep;
  rep.b2 = static_cast<int>(M.D) + 1;
  rep.precision = M.r;
  rep.heuristic = M.heuristic;
  const int e = 1 + M.shift;
  const u64 pe = ipow(M.p, e) % R.modulus();
  const int c_plus = corank_upper_bound(minus_scalar(A, pe));
  const int c_minus = corank_upper_bound(minus_scalar(A, R.neg(pe)));
  rep.arithmetic = 1 + c_plus;
  UniPoly C = charpoly_mod(A);
  NormalizedCharpoly Q;
  if ((M.n - 1) % 2 == 0) Q = normalized_charpoly(A, (M.n - 1) / 2 + M.shift);
  rep.normalized_precision = Q.available ? Q.precision : 0;
  rep.normalized_note = Q.available ? "" : Q.reason;
  int mixed = 1 + c_plus + c_minus;
  int ord = 1;
  for (int n : enumerate_cyclotomic_levels(static_cast<int>(M.D))) {
    LevelBound lb;
    lb.n = n;
    lb.phi = static_cast<int>(euler_phi(n));
    lb.integral_bound = cyclotomic_multiplicity_bound(C, n, e);
    lb.normalized_bound = normalized_multiplicity_bound(Q, n);
    lb.bound = lb.normalized_bound >= 0 ? std::min(lb.integral_bound, lb.normalized_bound) : lb.integral_bound;
    ord += lb.phi * lb.bound;
    if (n <= 2) {
      lb.corank = n == 1 ? c_plus : c_minus;
      lb.method = "corank in the mixed bound, multiplicity in the ord bound";
    } else {
      lb.method = "multiplicity";
      mixed += lb.phi * lb.bound;
    }
    if (n <= 2 || lb.bound > 0) rep.levels.push_back(lb);
  }
  rep.mixed_bound = mixed;
  rep.ord_bound_raw = ord;
  rep.ord_bound = ord;
  if ((ord - rep.b2) % 2 != 0) {
    rep.ord_bound = ord - 1;
    rep.parity_adjusted = true;
  }
  rep.geometric = std::min({mixed, rep.ord_bound, rep.b2});
  return rep;
}

}  // namespace hfrob
