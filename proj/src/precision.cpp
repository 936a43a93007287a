#include "hfrob/precision.hpp"

#include <algorithm>

namespace hfrob {

int f0(int m, int n, u64 p) {
  int s = 0;
  for (int i = 1; i <= n; ++i) s += ilog(static_cast<u64>(std::max(1, m - i)), p);
  return s;
}

int factorial_bound(int m, u64 p) { return vp_factorial(m - 1, p); }

int carries_g(int m, int i, u64 p) {
  return vp_factorial(m + i - 1, p) - vp_factorial(i, p) - vp_factorial(m - 1, p);
}

void LossTable::set(int j, int v) {
  if (j < 1) throw std::invalid_argument("loss table index must be positive");
  if (j > size()) {
    int old = size();
    a_.resize(static_cast<std::size_t>(j), 0);
    for (int t = old + 1; t < j; ++t) a_[t - 1] = f0(t, n_, p_);
  }
  a_[j - 1] = v;
}

int LossTable::sound_bound(int j) const {
  int b = std::min(f0(j, n_, p_), factorial_bound(j, p_));
  for (int t = std::max(j, 1); t <= size(); ++t) b = std::min(b, at(t));
  return b;
}

namespace {

// n*log_p(x) - l <= N, compared exactly as x^n <= p^(N+l)
bool log_test(int x, int n, int l, int N, u64 p) {
  if (N + l < 0) return false;
  BigInt lhs = boost::multiprecision::pow(BigInt(x), static_cast<unsigned>(n));
  BigInt rhs = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(N + l));
  return lhs <= rhs;
}

}  // namespace

LossTable refine_table(int m, const LossTable& a0, const RefineOptions& opt) {
  const u64 p = a0.prime();
  const int n = a0.n();
  const int P = static_cast<int>(p);
  LossTable A(p, n);
  for (int j = 1; j <= std::max(n, m); ++j) A.set(j, a0.has(j) ? a0.at(j) : f0(j, n, p));

  for (int pass = 1;; ++pass) {
    if (pass > opt.max_passes) {
      if (opt.throw_on_cap) throw RefinementUnstable();
      A.set_stabilized(false);
      return A;
    }
    const LossTable before = A;
    int j = n + 1;
    bool restart = false;
    while (!restart) {
      if (!A.has(j)) {
        if (A == before) return A;
        restart = true;
        break;
      }
      int j1 = P * ((j + P - 1) / P);
      int N = n - 1 + A.at(j1 / P);
      for (int l = 1;; ++l) {
        int x = j1 + l * P;
        if (n * P < x && log_test(x, n, l, N, p)) {
          int v = std::min(N, f0(j1, n, p));
          for (int t = j; t <= j1; ++t) A.set(t, v);
          j = j1 + 1;
          break;
        }
        int gg = carries_g(j1, l, p);
        if (f0(x, n, p) - l - gg <= N) continue;
        for (int t = A.size() + 1; t <= x; ++t) A.set(t, f0(t, n, p));
        N = std::max(A.at(x) - l - gg, N);
      }
    }
  }
}

PrecisionPlan choose_working_precision(int r, int n, u64 p, bool use_refinement,
                                       const RefineOptions& opt) {
  if (r < 1) throw std::invalid_argument("target precision must be positive");
  PrecisionPlan plan;
  plan.p = p;
  plan.n = n;
  plan.r = r;
  plan.refined = use_refinement;
  const int P = static_cast<int>(p);
  LossTable A(p, n);
  for (int s = r;; ++s) {
    bool ok = false;
    for (int j = s - n + 1;; ++j) {
      if (j > 0 && log_test(P * (n + j) - 1, n, 0, n - 1 + j - r, p)) {
        ok = true;
        break;
      }
      int val;
      if (use_refinement) {
        A = refine_table(P * (n + j), A, opt);
        val = A.at(P * (n + j));
      } else {
        val = f0(P * (n + j), n, p);
      }
      if (val > n - 1 + j - r) break;
    }
    if (ok) {
      plan.s = s;
      plan.j_max = s - n;
      if (!use_refinement) {
        A = LossTable(p, n);
        for (int t = 1; t <= P * (n + s - n + 1); ++t) A.set(t, f0(t, n, p));
      }
      plan.table = A;
      return plan;
    }
  }
}

bool truncation_valid(const PrecisionPlan& plan, int extra) {
  const int P = static_cast<int>(plan.p);
  for (int h = 1; h <= plan.n; ++h)
    for (int j = plan.j_max + 1; j <= plan.j_max + extra; ++j) {
      int m = P * (h + j);
      int a = plan.table.sound_bound(m);
      if (plan.n - 1 + j - a < plan.r) return false;
    }
  return true;
}

int arithmetic_precision(const PrecisionPlan& plan, int h_max) {
  int top = static_cast<int>(plan.p) * (h_max + std::max(plan.j_max, 0));
  int w = plan.r - (plan.n - 1) + factorial_bound(top, plan.p);
  return std::max(w, 1);
}

int certified_digits(u64 p, int n, int w, int top_pole) {
  return n - 1 + w - factorial_bound(top_pole, p);
}

}  // namespace hfrob
