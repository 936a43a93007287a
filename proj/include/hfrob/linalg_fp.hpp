#pragma once

#include "hfrob/residue.hpp"

#include <map>
#include <vector>

namespace hfrob {

// Incremental row echelon form over F_p. Columns are ordered so that column 0
// is the leading position; pivots are the leading column of each stored row.
class FpEchelon {
 public:
  FpEchelon(u64 p, std::size_t ncols) : p_(p), ncols_(ncols) {}

  // reduces the row and stores it if independent; returns true when stored
  bool insert(std::vector<u64> row);
  std::size_t rank() const { return rows_.size(); }
  std::size_t ncols() const { return ncols_; }
  bool is_pivot(std::size_t col) const { return rows_.count(col) != 0; }
  std::vector<std::size_t> non_pivots() const;
  // reduce a row against the stored rows, in place
  void reduce(std::vector<u64>& row) const;

 private:
  u64 p_;
  std::size_t ncols_;
  std::map<std::size_t, std::vector<u64>> rows_;  // pivot col -> monic row
};

}  // namespace hfrob
