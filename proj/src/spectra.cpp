#include "photonsim/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "photonsim/quadrature.hpp"

namespace photonsim::spectra {

namespace {

using constants::pi;
using constants::speed_of_light;

constexpr double kWindowWidths = 8.0;  // integration window: omega0 +- 8*delta_omega

double gaussian_peak(const GaussianSpec& g) {
  // normalization of exp(-4 (omega-omega0)^2 / delta_omega^2)
  return 2.0 / (g.delta_omega * std::sqrt(pi));
}

double interp_density(const TabulatedSpec& t, double omega) {
  if (omega <= t.omega.front() || omega >= t.omega.back()) return 0.0;
  const auto it = std::upper_bound(t.omega.begin(), t.omega.end(), omega);
  const std::size_t hi = static_cast<std::size_t>(it - t.omega.begin());
  const std::size_t lo = hi - 1;
  const double u = (omega - t.omega[lo]) / (t.omega[hi] - t.omega[lo]);
  return (1.0 - u) * t.density[lo] + u * t.density[hi];
}

// Panels aligned with the tabulated segments keep the piecewise-linear
// density exact under Gauss-Legendre.
SpectralGrid tabulated_grid(const TabulatedSpec& t, std::size_t nodes) {
  constexpr std::size_t order = 10;
  const double support = t.omega.back() - t.omega.front();
  SpectralGrid grid;
  grid.carrier = t.mean_omega;
  grid.mono_weight = 0.0;
  grid.mono_omega = t.mean_omega;
  for (std::size_t s = 0; s + 1 < t.omega.size(); ++s) {
    const double a = t.omega[s];
    const double b = t.omega[s + 1];
    const double share = static_cast<double>(nodes) * (b - a) / support;
    const std::size_t panels = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(share / static_cast<double>(order))));
    auto panelized = quad::composite(a, b, panels * order, order);
    for (std::size_t i = 0; i < panelized.x.size(); ++i) {
      grid.omega.push_back(panelized.x[i]);
      grid.weight.push_back(panelized.w[i] * interp_density(t, panelized.x[i]));
    }
  }
  double mass = 0.0;
  for (double w : grid.weight) mass += w;
  if (mass <= 0.0) {
    throw ValidationError("ZeroMass", "tabulated spectrum integrates to zero", mass);
  }
  for (double& w : grid.weight) w /= mass;
  return grid;
}

SpectralGrid gaussian_grid(const GaussianSpec& g, std::size_t nodes) {
  SpectralGrid grid;
  grid.carrier = g.omega0;
  grid.mono_weight = g.mono_fraction;
  grid.mono_omega = g.omega0;
  auto panelized = quad::composite(g.omega0 - kWindowWidths * g.delta_omega,
                                   g.omega0 + kWindowWidths * g.delta_omega, nodes);
  grid.omega = std::move(panelized.x);
  grid.weight = std::move(panelized.w);
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.omega.size(); ++i) {
    const double d = grid.omega[i] - g.omega0;
    grid.weight[i] *= std::exp(-4.0 * d * d / (g.delta_omega * g.delta_omega));
    mass += grid.weight[i];
  }
  const double target = 1.0 - g.mono_fraction;
  for (double& w : grid.weight) w *= target / mass;
  return grid;
}

Complex grid_coherence(const SpectralGrid& grid, double tau) {
  // Carrier phase is factored out so the summed phases stay small.
  Complex acc{0.0, 0.0};
  for (std::size_t i = 0; i < grid.omega.size(); ++i) {
    const double phase = (grid.omega[i] - grid.carrier) * tau;
    acc += grid.weight[i] * Complex{std::cos(phase), std::sin(phase)};
  }
  if (grid.mono_weight > 0.0) {
    const double phase = (grid.mono_omega - grid.carrier) * tau;
    acc += grid.mono_weight * Complex{std::cos(phase), std::sin(phase)};
  }
  const double cphase = grid.carrier * tau;
  return Complex{std::cos(cphase), std::sin(cphase)} * acc;
}

}  // namespace

Spectrum Spectrum::gaussian(double omega0, double delta_omega, double mono_fraction) {
  if (!(omega0 > 0.0)) {
    throw ValidationError("Domain", "omega0 must be positive", omega0);
  }
  if (!(delta_omega > 0.0)) {
    throw ValidationError("Domain", "delta_omega must be positive", delta_omega);
  }
  if (!(mono_fraction >= 0.0 && mono_fraction <= 1.0)) {
    throw ValidationError("Domain", "mono_fraction must lie in [0, 1]", mono_fraction);
  }
  return Spectrum(GaussianSpec{omega0, delta_omega, mono_fraction});
}

Spectrum Spectrum::gaussian_from_bandwidth(double lambda0, double delta_lambda,
                                           double mono_fraction) {
  if (!(lambda0 > 0.0)) {
    throw ValidationError("Domain", "lambda0 must be positive", lambda0);
  }
  if (!(delta_lambda > 0.0 && delta_lambda < lambda0)) {
    throw ValidationError("Domain", "delta_lambda must lie in (0, lambda0)", delta_lambda);
  }
  const double omega0 = 2.0 * pi * speed_of_light / lambda0;
  const double delta_omega = 2.0 * pi * speed_of_light * delta_lambda / (lambda0 * lambda0);
  return gaussian(omega0, delta_omega, mono_fraction);
}

Spectrum Spectrum::tabulated(std::vector<double> omega, std::vector<double> density) {
  if (omega.size() < 2 || omega.size() != density.size()) {
    throw ValidationError("Domain", "tabulated spectrum needs >= 2 (omega, density) rows",
                          static_cast<double>(omega.size()));
  }
  for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
    if (!(omega[i] < omega[i + 1])) {
      throw ValidationError("Domain", "tabulated omega values must increase strictly",
                            omega[i]);
    }
  }
  for (double d : density) {
    if (d < 0.0 || !std::isfinite(d)) {
      throw ValidationError("Domain", "tabulated density must be finite and nonnegative", d);
    }
  }
  // Trapezoid normalization is exact for the piecewise-linear density.
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
    integral += 0.5 * (density[i] + density[i + 1]) * (omega[i + 1] - omega[i]);
  }
  if (!(integral > 0.0)) {
    throw ValidationError("ZeroMass", "tabulated spectrum integrates to zero", integral);
  }
  double first_moment = 0.0;
  for (std::size_t i = 0; i + 1 < omega.size(); ++i) {
    const double h = omega[i + 1] - omega[i];
    // exact integral of omega * linear density over the segment
    first_moment += h / 6.0 *
                    (density[i] * (2.0 * omega[i] + omega[i + 1]) +
                     density[i + 1] * (omega[i] + 2.0 * omega[i + 1]));
  }
  TabulatedSpec t;
  t.mean_omega = first_moment / integral;
  t.density = std::move(density);
  for (double& d : t.density) d /= integral;
  t.omega = std::move(omega);
  return Spectrum(std::move(t));
}

Spectrum Spectrum::load_tabulated(std::istream& in) {
  std::vector<double> omega, density;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream row(line);
    double w, d;
    if (!(row >> w)) continue;  // blank or comment-only line
    if (!(row >> d)) {
      throw ParseError("tabulated spectrum line " + std::to_string(lineno) +
                       ": expected two columns (omega_rad_per_s, density)");
    }
    omega.push_back(w);
    density.push_back(d);
  }
  return tabulated(std::move(omega), std::move(density));
}

Spectrum Spectrum::load_tabulated(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open spectrum file: " + path.string());
  }
  return load_tabulated(in);
}

double Spectrum::density_at(double omega) const {
  if (const auto* g = std::get_if<GaussianSpec>(&v_)) {
    const double d = omega - g->omega0;
    return (1.0 - g->mono_fraction) * gaussian_peak(*g) *
           std::exp(-4.0 * d * d / (g->delta_omega * g->delta_omega));
  }
  return interp_density(std::get<TabulatedSpec>(v_), omega);
}

Complex Spectrum::coherence(double tau) const {
  if (const auto* g = std::get_if<GaussianSpec>(&v_)) {
    const double x = g->delta_omega * tau;
    const double envelope = std::exp(-x * x / 16.0);
    const double mixed = (1.0 - g->mono_fraction) * envelope + g->mono_fraction;
    const double cphase = g->omega0 * tau;
    return Complex{std::cos(cphase), std::sin(cphase)} * mixed;
  }
  return coherence_quadrature(tau);
}

Complex Spectrum::coherence_quadrature(double tau, std::size_t nodes) const {
  return grid_coherence(quadrature_grid(nodes), tau);
}

CoherenceSample Spectrum::coherence_sample(double tau) const {
  CoherenceSample s{tau, coherence(tau)};
  if (std::abs(s.value) > 1.0 + 1e-9) {
    throw NumericalError("coherence magnitude exceeds 1; quadrature is unreliable here");
  }
  return s;
}

SpectralGrid Spectrum::quadrature_grid(std::size_t nodes) const {
  if (const auto* g = std::get_if<GaussianSpec>(&v_)) return gaussian_grid(*g, nodes);
  return tabulated_grid(std::get<TabulatedSpec>(v_), nodes);
}

double Spectrum::carrier_omega() const {
  if (const auto* g = std::get_if<GaussianSpec>(&v_)) return g->omega0;
  return std::get<TabulatedSpec>(v_).mean_omega;
}

Spectrum::Support Spectrum::support() const {
  if (const auto* g = std::get_if<GaussianSpec>(&v_)) {
    return Support{g->omega0 - kWindowWidths * g->delta_omega,
                   g->omega0 + kWindowWidths * g->delta_omega};
  }
  const auto& t = std::get<TabulatedSpec>(v_);
  return Support{t.omega.front(), t.omega.back()};
}

}  // namespace photonsim::spectra
