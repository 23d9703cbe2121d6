#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid input data; `field` names the offending quantity.
class ValidationError : public Error {
  public:
    ValidationError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

/// State magnitude exceeded the integrator's divergence limit.
class BlowUpError : public Error {
  public:
    BlowUpError(double tau, double magnitude)
        : Error("state blow-up at tau=" + std::to_string(tau) +
                " (|y| ~ " + std::to_string(magnitude) + ")"),
          tau_(tau) {}
    double tau() const { return tau_; }

  private:
    double tau_;
};

/// A closed-form expression is undefined in the requested regime
/// (wrong stability class, resonance, or degenerate rate).
class RegimeError : public Error {
  public:
    using Error::Error;
};

/// Numerical failure: singular inertia, quadrature non-convergence, ...
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// Malformed or empty sweep grids.
class GridError : public Error {
  public:
    using Error::Error;
};

}  // namespace spinlab
