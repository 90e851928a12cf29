#include "photonsim/twophoton.hpp"

#include <cmath>

#include "photonsim/quadrature.hpp"

namespace photonsim::twophoton {

namespace {

using photonsim::Complex;
using qmat::Density4;
using qmat::Mat2;
using qmat::Mat4;
using constants::speed_of_light;

constexpr double kConvergenceTol = 1e-7;
constexpr double kAngleTol = 1e-9;

Complex cis(double phase) { return Complex{std::cos(phase), std::sin(phase)}; }

Mat4 phase_operator(double eps, const TwoPhotonConfig& cfg) {
  // Photon in path L sees omega0/2 + eps, path R sees omega0/2 - eps. The
  // relative phase per path is omega * opd / c on the slow axis.
  const double wl = cfg.joint.pump_omega0() / 2.0 + eps;
  const double wr = cfg.joint.pump_omega0() / 2.0 - eps;
  const Mat2 ul = Mat2::from_rows({{1.0, 0.0}, {0.0, cis(wl * cfg.opd_l / speed_of_light)}});
  const Mat2 ur = Mat2::from_rows({{1.0, 0.0}, {0.0, cis(wr * cfg.opd_r / speed_of_light)}});
  return qmat::tensor(ur, ul);  // slow factor acts on path R
}

struct AlignedAxes {
  double tau_l;  // signed seconds; axes swapped -> negated
  double tau_r;
};

// Axis-aligned means each crystal angle is a multiple of pi/2; an odd
// multiple swaps fast and slow axes, which is the same channel as negating
// the opd.
AlignedAxes aligned_axes(const TwoPhotonConfig& cfg) {
  auto fold = [](double theta, double opd, const char* which) {
    const double s = std::sin(2.0 * theta);
    const double c = std::cos(2.0 * theta);
    if (std::abs(s) > kAngleTol) {
      throw ValidationError("Domain",
                            std::string("closed form needs axis-aligned angles; ") + which +
                                " is not a multiple of pi/2",
                            theta);
    }
    return (c > 0.0 ? opd : -opd) / speed_of_light;
  };
  return AlignedAxes{fold(cfg.theta_l, cfg.opd_l, "theta_l"),
                     fold(cfg.theta_r, cfg.opd_r, "theta_r")};
}

}  // namespace

const char* to_string(BellKind kind) {
  switch (kind) {
    case BellKind::phi_plus: return "phi_plus";
    case BellKind::phi_minus: return "phi_minus";
    case BellKind::psi_plus: return "psi_plus";
    case BellKind::psi_minus: return "psi_minus";
  }
  return "?";
}

qmat::Density4 bell(BellKind kind) {
  Mat4 m;
  const double half = 0.5;
  switch (kind) {
    case BellKind::phi_plus:
    case BellKind::phi_minus: {
      const double sign = kind == BellKind::phi_plus ? 1.0 : -1.0;
      m(0, 0) = half;
      m(3, 3) = half;
      m(0, 3) = sign * half;
      m(3, 0) = sign * half;
      break;
    }
    case BellKind::psi_plus:
    case BellKind::psi_minus: {
      const double sign = kind == BellKind::psi_plus ? 1.0 : -1.0;
      m(1, 1) = half;
      m(2, 2) = half;
      m(1, 2) = sign * half;
      m(2, 1) = sign * half;
      break;
    }
  }
  return qmat::validate_density(m);
}

qmat::Mat4 rotation4(double theta_l, double theta_r) {
  return qmat::tensor(qmat::rotation2(theta_r), qmat::rotation2(theta_l));
}

JointSpectrum::JointSpectrum(double pump_omega0, spectra::Spectrum daughter)
    : pump_omega0_(pump_omega0), daughter_(std::move(daughter)) {
  if (!(pump_omega0_ > 0.0)) {
    throw ValidationError("Domain", "pump frequency must be positive", pump_omega0_);
  }
  if (const auto* g = daughter_.gaussian_params()) {
    if (g->mono_fraction != 0.0) {
      throw ValidationError("Domain",
                            "a monochromatic daughter component is not meaningful for the "
                            "joint spectral density",
                            g->mono_fraction);
    }
  }
}

JointSpectrum JointSpectrum::degenerate_gaussian(double daughter_lambda0,
                                                 double daughter_delta_lambda) {
  auto daughter =
      spectra::Spectrum::gaussian_from_bandwidth(daughter_lambda0, daughter_delta_lambda, 0.0);
  return JointSpectrum(2.0 * daughter.carrier_omega(), std::move(daughter));
}

double JointSpectrum::coherence(double tau) const {
  if (const auto* g = daughter_.gaussian_params()) {
    // f(eps) ~ exp(-8 eps^2 / delta_omega^2): variance delta_omega^2/16,
    // so J(tau) = exp(-delta_omega^2 tau^2 / 8).
    const double x = g->delta_omega * tau;
    return std::exp(-x * x / 8.0);
  }
  return coherence_quadrature(tau);
}

double JointSpectrum::coherence_quadrature(double tau, std::size_t nodes) const {
  const auto grid = quadrature_grid(nodes);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.epsilon.size(); ++i) {
    acc += grid.weight[i] * std::cos(2.0 * grid.epsilon[i] * tau);
  }
  return acc;
}

JointSpectrum::Grid JointSpectrum::quadrature_grid(std::size_t nodes) const {
  const double half_pump = pump_omega0_ / 2.0;
  double window = 0.0;
  if (const auto* g = daughter_.gaussian_params()) {
    // The product of the shifted Gaussians is centered at eps = 0 with
    // 1/e half-width delta_omega / (2 sqrt 2); +-8 widths is ample.
    window = 8.0 * g->delta_omega;
  } else {
    // Tabulated daughters: both factors must be inside the tabulated support.
    const auto sup = daughter_.support();
    window = std::min(sup.hi - half_pump, half_pump - sup.lo);
    if (!(window > 0.0)) {
      throw ValidationError("Domain",
                            "daughter spectrum support does not straddle half the pump "
                            "frequency",
                            window);
    }
  }
  auto panelized = quad::composite(-window, window, nodes);
  Grid grid;
  grid.epsilon = std::move(panelized.x);
  grid.weight = std::move(panelized.w);
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.epsilon.size(); ++i) {
    grid.weight[i] *= daughter_.density_at(half_pump + grid.epsilon[i]) *
                      daughter_.density_at(half_pump - grid.epsilon[i]);
    mass += grid.weight[i];
  }
  if (!(mass > 0.0)) {
    throw ValidationError("ZeroMass", "joint spectral density integrates to zero", mass);
  }
  for (double& w : grid.weight) w /= mass;
  return grid;
}

qmat::Density4 evolve_two(const qmat::Density4& rho0, const TwoPhotonConfig& cfg,
                          const EvolveTwoOptions& options) {
  auto run = [&rho0, &cfg](std::size_t nodes) {
    const auto grid = cfg.joint.quadrature_grid(nodes);
    const Mat4 rot = rotation4(cfg.theta_l, cfg.theta_r);
    const Mat4 rot_dag = rot.adjoint();
    Mat4 acc;
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.epsilon.size(); ++i) {
      const Mat4 k = rot * phase_operator(grid.epsilon[i], cfg) * rot_dag;
      acc = acc + grid.weight[i] * (k * rho0.mat() * k.adjoint());
      mass += grid.weight[i];
    }
    return qmat::hermitize(acc * Complex{1.0 / mass, 0.0});
  };

  Mat4 coarse = run(options.quadrature_nodes);
  if (options.check_convergence) {
    const Mat4 fine = run(2 * options.quadrature_nodes);
    if (coarse.max_abs_diff(fine) > kConvergenceTol) {
      throw NumericalError("joint-spectrum quadrature did not converge when doubling nodes");
    }
    coarse = fine;
  }
  return qmat::validate_density(coarse);
}

qmat::Density4 evolve_two_closed(BellKind kind, const TwoPhotonConfig& cfg) {
  const auto axes = aligned_axes(cfg);
  const double w0 = cfg.joint.pump_omega0();
  Mat4 m;
  if (kind == BellKind::phi_plus || kind == BellKind::phi_minus) {
    const double sign = kind == BellKind::phi_plus ? 1.0 : -1.0;
    m(0, 0) = 0.5;
    m(3, 3) = 0.5;
    const Complex corner = sign * 0.5 * cis(-w0 * (axes.tau_l + axes.tau_r) / 2.0) *
                           cfg.joint.coherence((axes.tau_l - axes.tau_r) / 2.0);
    m(0, 3) = corner;
    m(3, 0) = std::conj(corner);
  } else {
    const double sign = kind == BellKind::psi_plus ? 1.0 : -1.0;
    m(1, 1) = 0.5;
    m(2, 2) = 0.5;
    const Complex inner = sign * 0.5 * cis(w0 * (axes.tau_l - axes.tau_r) / 2.0) *
                          cfg.joint.coherence((axes.tau_l + axes.tau_r) / 2.0);
    m(1, 2) = inner;
    m(2, 1) = std::conj(inner);
  }
  return qmat::validate_density(m);
}

}  // namespace photonsim::twophoton
