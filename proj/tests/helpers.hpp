#pragma once

// Shared test utilities: random states and an independent trapezoid
// integrator used as the oracle for coherence values. The oracle deliberately
// avoids the library quadrature path.

#include <cmath>
#include <complex>
#include <random>

#include "photonsim/qmat.hpp"

namespace testutil {

using photonsim::Complex;
using photonsim::qmat::Mat2;
using photonsim::qmat::Mat4;

inline Complex random_complex(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Complex{u(rng), u(rng)};
}

template <std::size_t N>
photonsim::qmat::Mat<N> random_matrix(std::mt19937_64& rng) {
  photonsim::qmat::Mat<N> m;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c) m(r, c) = random_complex(rng);
  return m;
}

// rho = B B^dag / tr(B B^dag): a generic full-rank mixed state.
template <std::size_t N>
photonsim::qmat::DensityMatrix<N> random_density(std::mt19937_64& rng) {
  const auto b = random_matrix<N>(rng);
  auto m = b * b.adjoint();
  m = m * Complex{1.0 / m.trace().real(), 0.0};
  return photonsim::qmat::validate_density(photonsim::qmat::hermitize(m));
}

template <std::size_t N>
photonsim::qmat::Ket<N> random_ket(std::mt19937_64& rng) {
  photonsim::qmat::Ket<N> k;
  double norm2 = 0.0;
  for (auto& v : k) {
    v = random_complex(rng);
    norm2 += std::norm(v);
  }
  for (auto& v : k) v /= std::sqrt(norm2);
  return k;
}

// Independent oracle: plain trapezoid integration of g over [a, b].
template <typename F>
Complex trapezoid(F&& g, double a, double b, std::size_t n = 200001) {
  const double h = (b - a) / static_cast<double>(n - 1);
  Complex acc = 0.5 * (g(a) + g(b));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += g(a + h * static_cast<double>(i));
  return acc * h;
}

// Oracle coherence of the normalized Gaussian density
// exp(-4 (w - w0)^2 / dw^2) evaluated by trapezoid integration.
inline Complex oracle_gaussian_coherence(double omega0, double delta_omega, double tau) {
  auto density = [&](double w) {
    const double d = w - omega0;
    return std::exp(-4.0 * d * d / (delta_omega * delta_omega));
  };
  const double lo = omega0 - 10.0 * delta_omega;
  const double hi = omega0 + 10.0 * delta_omega;
  const Complex mass = trapezoid([&](double w) { return Complex{density(w), 0.0}; }, lo, hi);
  // factor the carrier for numerical sanity, restore afterwards
  const Complex base = trapezoid(
      [&](double w) {
        const double phase = (w - omega0) * tau;
        return density(w) * Complex{std::cos(phase), std::sin(phase)};
      },
      lo, hi);
  return Complex{std::cos(omega0 * tau), std::sin(omega0 * tau)} * base / mass;
}

}  // namespace testutil
