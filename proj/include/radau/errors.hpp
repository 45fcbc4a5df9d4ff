#pragma once

#include <stdexcept>
#include <string>

namespace radau {

// Thrown when an algorithm fails for numerical reasons (singular matrix,
// root refinement failure, non-finite intermediate, ...). Argument and
// contract violations use std::invalid_argument instead.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A training run hit a non-finite loss and stopped; distinguished from
// plain numerical errors so the CLI can map it to its own exit code.
class TrainingAbort : public NumericalError {
 public:
  explicit TrainingAbort(const std::string& what) : NumericalError(what) {}
};

}  // namespace radau
