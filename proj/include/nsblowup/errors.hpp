#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nsblowup {

/// Base of every error raised by the library. Callers that only care about
/// "something in the lab failed" catch this; the CLI maps it to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class EvaluationAtOrPastBlowup : public Error {
 public:
  using Error::Error;
};

class AxisSingularity : public Error {
 public:
  using Error::Error;
};

// --- symbolic engine ---

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)),
        name_(name),
        offset_(offset) {}
  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class ExponentNotSupported : public Error {
 public:
  using Error::Error;
};

// --- numeric checks ---

class StencilCrossesSingularity : public Error {
 public:
  using Error::Error;
};

class QuadratureUnderResolved : public Error {
 public:
  QuadratureUnderResolved(const std::string& what, double coarse, double fine)
      : Error(what), coarse_(coarse), fine_(fine) {}
  double coarse() const noexcept { return coarse_; }
  double fine() const noexcept { return fine_; }

 private:
  double coarse_;
  double fine_;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

class NonPositiveQuantity : public Error {
 public:
  using Error::Error;
};

// --- axisymmetric solver ---

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, int iterations, double residual)
      : Error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration file or option; `line` is 1-based, 0 when the
/// problem is not tied to a file line.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace nsblowup
