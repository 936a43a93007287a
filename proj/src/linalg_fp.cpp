#include "hfrob/linalg_fp.hpp"

namespace hfrob {

void FpEchelon::reduce(std::vector<u64>& row) const {
  ResidueRing F(p_, 1);
  for (const auto& [col, piv] : rows_) {
    u64 c = row[col];
    if (c == 0) continue;
    for (std::size_t k = col; k < ncols_; ++k)
      if (piv[k]) row[k] = F.sub(row[k], F.mul(c, piv[k]));
  }
}

bool FpEchelon::insert(std::vector<u64> row) {
  ResidueRing F(p_, 1);
  for (auto& x : row) x %= p_;
  reduce(row);
  std::size_t lead = 0;
  while (lead < ncols_ && row[lead] == 0) ++lead;
  if (lead == ncols_) return false;
  u64 inv = F.inverse_or_throw(row[lead]);
  for (std::size_t k = lead; k < ncols_; ++k) row[k] = F.mul(row[k], inv);
  // keep stored rows fully reduced so reduce() needs one pass in pivot order
  for (auto& [col, piv] : rows_) {
    u64 c = piv[lead];
    if (c == 0) continue;
    for (std::size_t k = lead; k < ncols_; ++k)
      if (row[k]) piv[k] = F.sub(piv[k], F.mul(c, row[k]));
  }
  rows_.emplace(lead, std::move(row));
  return true;
}

std::vector<std::size_t> FpEchelon::non_pivots() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < ncols_; ++c)
    if (!rows_.count(c)) out.push_back(c);
  return out;
}

}  // namespace hfrob
