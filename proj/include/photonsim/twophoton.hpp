#pragma once

// Two-photon engine for frequency-anticorrelated pairs. The composite basis
// is ordered (11, 21, 12, 22), where the first subscript is the polarization
// of the photon in path L (fast index) and the second of the photon in path R
// (slow index). Daughter frequencies are omega0/2 +- epsilon with omega0 the
// (monochromatic) pump frequency.

#include "photonsim/qmat.hpp"
#include "photonsim/spectra.hpp"

namespace photonsim::twophoton {

enum class BellKind { phi_plus, phi_minus, psi_plus, psi_minus };

const char* to_string(BellKind kind);

qmat::Density4 bell(BellKind kind);

// Independent rotations by theta_l in path L and theta_r in path R, as a
// single 4x4 operator in the fixed ordering. Factorizes as
// tensor(rotation2(theta_r), rotation2(theta_l)).
qmat::Mat4 rotation4(double theta_l, double theta_r);

// Joint spectral density f(eps) proportional to
// |A(omega0/2 + eps)|^2 |A(omega0/2 - eps)|^2, normalized over eps. Always an
// even function of eps.
class JointSpectrum {
 public:
  JointSpectrum(double pump_omega0, spectra::Spectrum daughter);

  // Degenerate Gaussian source: daughter spectrum centered at the given
  // wavelength, pump at twice the daughter frequency.
  static JointSpectrum degenerate_gaussian(double daughter_lambda0,
                                           double daughter_delta_lambda);

  double pump_omega0() const { return pump_omega0_; }
  const spectra::Spectrum& daughter() const { return daughter_; }

  // J(tau) = integral f(eps) exp(2 i eps tau) d(eps); real by evenness.
  // Closed form for Gaussian daughters, quadrature otherwise.
  double coherence(double tau) const;
  double coherence_quadrature(double tau, std::size_t nodes = 2001) const;

  struct Grid {
    std::vector<double> epsilon;
    std::vector<double> weight;  // includes f(eps); sums to 1
  };
  Grid quadrature_grid(std::size_t nodes = 2001) const;

 private:
  double pump_omega0_;
  spectra::Spectrum daughter_;
};

struct TwoPhotonConfig {
  double opd_l = 0.0;   // meters; negative models the axes-swapped crystal
  double opd_r = 0.0;
  double theta_l = 0.0;  // radians
  double theta_r = 0.0;
  JointSpectrum joint;
};

struct EvolveTwoOptions {
  std::size_t quadrature_nodes = 2001;
  bool check_convergence = true;
};

// Numerical evolution: quadrature over eps of K(eps) rho K(eps)^dag with
// K = rotation4 * diag-phases * rotation4^dag.
qmat::Density4 evolve_two(const qmat::Density4& rho0, const TwoPhotonConfig& cfg,
                          const EvolveTwoOptions& options = {});

// Closed form for Bell-state inputs with axis-aligned crystals (both angles
// multiples of pi/2); rejects other orientations.
qmat::Density4 evolve_two_closed(BellKind kind, const TwoPhotonConfig& cfg);

}  // namespace photonsim::twophoton
