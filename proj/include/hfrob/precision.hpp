#pragma once

#include "hfrob/residue.hpp"

#include <stdexcept>
#include <vector>

namespace hfrob {

class RefinementUnstable : public std::runtime_error {
 public:
  RefinementUnstable() : std::runtime_error("refinement did not stabilize") {}
};

// sum_{i=1..n} floor(log_p max(1, m-i))
int f0(int m, int n, u64 p);
// v_p((m-1)!)
int factorial_bound(int m, u64 p);
// v_p(binom(m+i-1, i))
int carries_g(int m, int i, u64 p);

// Upper bounds A(j) on the pole-order precision loss, j = 1..size().
class LossTable {
 public:
  LossTable() = default;
  LossTable(u64 p, int n) : p_(p), n_(n) {}

  u64 prime() const { return p_; }
  int n() const { return n_; }
  int size() const { return static_cast<int>(a_.size()); }
  bool has(int j) const { return j >= 1 && j <= size(); }
  int at(int j) const { return a_.at(static_cast<std::size_t>(j - 1)); }
  void set(int j, int v);
  // bound for any j: stored entry or f0
  int bound(int j) const { return has(j) ? at(j) : f0(j, n_, p_); }
  // tightest bound implied by monotonicity of the true loss: min over stored
  // entries at indices >= j, f0(j) and v_p((j-1)!)
  int sound_bound(int j) const;
  const std::vector<int>& values() const { return a_; }
  bool stabilized() const { return stabilized_; }
  void set_stabilized(bool s) { stabilized_ = s; }
  friend bool operator==(const LossTable& a, const LossTable& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.a_ == b.a_;
  }

 private:
  u64 p_ = 2;
  int n_ = 0;
  std::vector<int> a_;
  bool stabilized_ = true;
};

struct RefineOptions {
  int max_passes = 20;
  // past the cap, return the last table (every entry is still a valid bound)
  bool throw_on_cap = false;
};

LossTable refine_table(int m, const LossTable& a0, const RefineOptions& opt = {});

struct PrecisionPlan {
  u64 p = 2;
  int n = 0;
  int r = 0;
  int s = 0;
  int j_max = 0;  // s - n
  bool refined = true;
  LossTable table;
};

PrecisionPlan choose_working_precision(int r, int n, u64 p, bool use_refinement = true,
                                       const RefineOptions& opt = {});

// n-1+j - A(p(h+j)) >= r for all h <= n and j in (j_max, j_max + extra]
bool truncation_valid(const PrecisionPlan& plan, int extra = 64);

// Modulus exponent for the reduction so that a column with top pole order
// p(h_max + j_max) keeps at least r certified digits.
int arithmetic_precision(const PrecisionPlan& plan, int h_max);
// certified digits after reduction at modulus exponent w
int certified_digits(u64 p, int n, int w, int top_pole);

}  // namespace hfrob
