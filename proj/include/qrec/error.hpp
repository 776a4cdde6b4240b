#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qrec {

enum class ErrorCode {
  invalid_input,
  resource_cap,
  singular_specialization,
  no_stable_recurrence,
  insufficient_data,
  non_vanishing_tail,
  prime_disagreement,
  lift_overflow,
  not_in_catalogue,
  not_invariant,
  underdetermined_system,
  non_integer_solution,
  no_fit,
  insufficient_depth,
  missing_branching,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by the Q-system generator when Q_{m-1}^{(a)} vanishes in the field.
class SingularSpecialization : public Error {
 public:
  SingularSpecialization(int node, int level);

  int node() const noexcept { return node_; }
  int level() const noexcept { return level_; }

 private:
  int node_;
  int level_;
};

}  // namespace qrec
