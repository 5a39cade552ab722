#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace rank1sft {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Out-of-range argument or inconsistent configuration.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidMultiplicities : public Error {
 public:
  InvalidMultiplicities(std::string rule, const std::string& detail)
      : Error("invalid multiplicities (" + rule + "): " + detail), rule_(std::move(rule)) {}
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

// Evaluation requested at (or too close to) a pole.
class PoleError : public Error {
 public:
  PoleError(std::complex<double> location, std::string factor)
      : Error("pole of " + factor + " at (" + std::to_string(location.real()) + ", " +
              std::to_string(location.imag()) + ")"),
        location_(location),
        factor_(std::move(factor)) {}
  std::complex<double> location() const { return location_; }
  const std::string& factor() const { return factor_; }

 private:
  std::complex<double> location_;
  std::string factor_;
};

// Adaptive integration did not reach its tolerance; carries the best estimate.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, std::complex<double> estimate, double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  std::complex<double> estimate() const { return estimate_; }
  double error_bound() const { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace rank1sft
