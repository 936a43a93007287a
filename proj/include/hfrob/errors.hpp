#pragma once

#include <stdexcept>
#include <string>

namespace hfrob {

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularHypersurface : public std::runtime_error {
 public:
  SingularHypersurface(int witness_degree, long quotient_dim)
      : std::runtime_error("hypersurface is singular: quotient by (dP, P) has dimension " +
                           std::to_string(quotient_dim) + " in degree " +
                           std::to_string(witness_degree)),
        witness_degree(witness_degree),
        quotient_dim(quotient_dim) {}
  int witness_degree;
  long quotient_dim;
};

class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MemoryBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hfrob
