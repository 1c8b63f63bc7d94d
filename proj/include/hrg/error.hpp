#pragma once

#include <stdexcept>
#include <string>

namespace hrg {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  degenerate_levels = 3,
  guard_exceeded = 4,
  not_converged = 5,
  io = 6,
  format = 7,
  no_center = 8,
  unchecked_demand = 9,
  disconnected = 10,
  internal = 11,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Iterative eigensolver gave up; carries the best iterate found.
class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, double best_value, double residual, int iterations)
      : Error(ErrorCode::not_converged, what),
        best_value_(best_value),
        residual_(residual),
        iterations_(iterations) {}

  double best_value() const noexcept { return best_value_; }
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double best_value_;
  double residual_;
  int iterations_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const char* what) {
  if (!condition) fail(code, what);
}

}  // namespace hrg
