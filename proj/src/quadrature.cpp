#include "photonsim/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "photonsim/common.hpp"

namespace photonsim::quad {

namespace {

Rule make_rule(std::size_t n) {
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(constants::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

}  // namespace

const Rule& gauss_legendre(std::size_t order) {
  static std::map<std::size_t, Rule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

Panelized composite(double a, double b, std::size_t total_nodes, std::size_t order) {
  const Rule& rule = gauss_legendre(order);
  const std::size_t panels = std::max<std::size_t>(1, (total_nodes + order - 1) / order);
  Panelized out;
  out.x.reserve(panels * order);
  out.w.reserve(panels * order);
  const double h = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < order; ++i) {
      out.x.push_back(mid + 0.5 * h * rule.nodes[i]);
      out.w.push_back(0.5 * h * rule.weights[i]);
    }
  }
  return out;
}

}  // namespace photonsim::quad
