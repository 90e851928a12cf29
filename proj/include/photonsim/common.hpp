#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace photonsim {

using Complex = std::complex<double>;

namespace constants {
inline constexpr double speed_of_light = 299792458.0;  // m/s, exact
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

// Raised when a value breaks a declared invariant (non-Hermitian matrix,
// negative bandwidth, missing tomography basis, ...). `invariant()` names the
// violated condition, `magnitude()` the offending size where meaningful.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string invariant, std::string detail, double magnitude = 0.0)
      : std::runtime_error(invariant + ": " + detail),
        invariant_(std::move(invariant)),
        magnitude_(magnitude) {}

  const std::string& invariant() const { return invariant_; }
  double magnitude() const { return magnitude_; }

 private:
  std::string invariant_;
  double magnitude_;
};

// Raised when a quadrature estimate fails its self-consistency (node-doubling)
// check.
class NumericalError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for malformed scenario files; message names the offending field.
class ParseError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace photonsim
