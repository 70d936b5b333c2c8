#pragma once

#include <stdexcept>
#include <string>

namespace griffith {

enum class ErrorKind {
  DegenerateTriangle,
  InvalidArgument,
  SizeMismatch,
  NotConverged,
  Construction,
  Io,
  Inadmissible,
};

// Structured error: every failure the library reports carries a kind tag
// that callers (notably the CLI) map to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Thrown by the linear solver; carries the relative residual reached.
class SolveError : public Error {
 public:
  SolveError(const std::string& what, double residual, int iterations)
      : Error(ErrorKind::NotConverged, what),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace griffith
