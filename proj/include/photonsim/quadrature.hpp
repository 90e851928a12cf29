#pragma once

// Composite Gauss-Legendre quadrature used by the spectral coherence
// integrals. Node/weight tables are generated by Newton iteration on the
// Legendre polynomials and cached per order.

#include <cstddef>
#include <vector>

namespace photonsim::quad {

struct Rule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of the given order (1..64 supported).
const Rule& gauss_legendre(std::size_t order);

struct Panelized {
  std::vector<double> x;
  std::vector<double> w;
};

// Splits [a, b] into enough panels of a fixed-order rule to spend roughly
// `total_nodes` nodes, uniformly.
Panelized composite(double a, double b, std::size_t total_nodes, std::size_t order = 10);

}  // namespace photonsim::quad
