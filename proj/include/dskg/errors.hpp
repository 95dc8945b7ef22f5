#pragma once

#include <stdexcept>
#include <string>

#include "dskg/types.hpp"

namespace dskg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class DivergentSeries : public Error {
 public:
  using Error::Error;
};

class UnsupportedEll : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class InstabilityDetected : public Error {
 public:
  using Error::Error;
};

class NonFiniteIntegrand : public Error {
 public:
  using Error::Error;
};

/// Quadrature gave up; carries the best estimate it had.
class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, Complex best, double err)
      : Error(what), best_(best), err_(err) {}
  Complex best_estimate() const noexcept { return best_; }
  double err_est() const noexcept { return err_; }

 private:
  Complex best_;
  double err_;
};

/// Semi-infinite integration ran out of range before the tail settled.
class TailNotNegligible : public ToleranceNotMet {
 public:
  using ToleranceNotMet::ToleranceNotMet;
};

}  // namespace dskg
