#pragma once

// Frequency-spectrum models and their coherence functions. The coherence
// convention is fixed once here and reused everywhere:
//
//     F(tau) = integral f(omega) * exp(+i*omega*tau) d(omega),
//
// with f the normalized frequency density. A birefringent channel multiplies
// the upper off-diagonal density-matrix element by conj(F) and the lower one
// by F.

#include <filesystem>
#include <iosfwd>
#include <variant>
#include <vector>

#include "photonsim/common.hpp"

namespace photonsim::spectra {

struct GaussianSpec {
  double omega0;         // rad/s
  double delta_omega;    // rad/s; 1/e half-width of the density is delta_omega/2
  double mono_fraction;  // weight of a monochromatic line at omega0
};

struct TabulatedSpec {
  std::vector<double> omega;    // rad/s, strictly increasing
  std::vector<double> density;  // normalized on construction
  double mean_omega;
};

struct CoherenceSample {
  double tau;  // seconds
  Complex value;
};

// Quadrature sampling of a spectrum: continuous nodes with weights that
// already include the density (their sum is 1 - mono_weight), plus an
// optional monochromatic line.
struct SpectralGrid {
  std::vector<double> omega;
  std::vector<double> weight;
  double mono_weight = 0.0;
  double mono_omega = 0.0;
  double carrier = 0.0;  // phase-extraction frequency
};

class Spectrum {
 public:
  static Spectrum gaussian(double omega0, double delta_omega, double mono_fraction = 0.0);

  // Gaussian spectrum from central wavelength and bandwidth (both meters):
  // omega0 = 2*pi*c/lambda0, delta_omega = 2*pi*c*delta_lambda/lambda0^2.
  static Spectrum gaussian_from_bandwidth(double lambda0, double delta_lambda,
                                          double mono_fraction = 0.0);

  static Spectrum tabulated(std::vector<double> omega, std::vector<double> density);

  // Two-column text (omega_rad_per_s, density); '#' starts a comment line.
  static Spectrum load_tabulated(std::istream& in);
  static Spectrum load_tabulated(const std::filesystem::path& path);

  double density_at(double omega) const;

  // F(tau); closed form for Gaussian spectra, composite Gauss-Legendre
  // quadrature otherwise.
  Complex coherence(double tau) const;

  // Quadrature evaluation regardless of variant.
  Complex coherence_quadrature(double tau, std::size_t nodes = 2001) const;

  CoherenceSample coherence_sample(double tau) const;

  SpectralGrid quadrature_grid(std::size_t nodes = 2001) const;

  bool is_gaussian() const { return std::holds_alternative<GaussianSpec>(v_); }
  const GaussianSpec* gaussian_params() const { return std::get_if<GaussianSpec>(&v_); }
  double carrier_omega() const;

  struct Support {
    double lo, hi;
  };
  // Integration window: the tabulated range, or omega0 +- 8*delta_omega.
  Support support() const;

 private:
  explicit Spectrum(GaussianSpec g) : v_(g) {}
  explicit Spectrum(TabulatedSpec t) : v_(std::move(t)) {}
  std::variant<GaussianSpec, TabulatedSpec> v_;
};

}  // namespace photonsim::spectra
