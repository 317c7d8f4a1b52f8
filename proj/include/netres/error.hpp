#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netres {

enum class ErrorKind {
  Parse,        // malformed netlist or matrix input
  Degenerate,   // element collapses onto a single node
  Domain,       // bad argument (index out of range, alpha == beta, ...)
  Validation,   // Laplacian fails its Kirchhoff structure checks
  Spectral,     // eigensystem unusable for the resistance formula
  NonReal,      // imaginary residue above tolerance
  Singular,     // grounded reduced system has no unique solution
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorKind::Parse, line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  /// 1-based source line, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class SpectralFailure {
  NotDiagonalizable,
  ZeroModeNotSimple,
  NoZeroMode,
};

class SpectralError : public Error {
 public:
  SpectralError(SpectralFailure failure, const std::string& what)
      : Error(ErrorKind::Spectral, what), failure_(failure) {}
  SpectralFailure failure() const noexcept { return failure_; }

 private:
  SpectralFailure failure_;
};

}  // namespace netres
