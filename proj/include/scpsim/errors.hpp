#pragma once

#include <stdexcept>
#include <string>

namespace scpsim {

// Input rejected by a precondition (bad file, bad dimension, wrong family, ...).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Problem size exceeds a documented capacity cap, or a sparsity promise was
// violated at run time.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace scpsim
