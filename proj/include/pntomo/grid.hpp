#pragma once

// Polar quadrature for integrals over the complex plane with measure d^2alpha/pi.

#include <complex>
#include <vector>

namespace pntomo {

struct GridSpec {
  double r_max = 4.5;
  int n_r = 48;
  int n_theta = 64;

  bool operator==(const GridSpec&) const = default;
};

/// Nodes alpha_j and weights w_j with  int d^2alpha/pi f ~ sum_j w_j f(alpha_j)
/// over the disk |alpha| <= r_max. Nodes are ordered radius-major: node
/// i * n_theta + k sits at radius index i, angle index k.
struct PhaseSpaceGrid {
  GridSpec spec;
  std::vector<std::complex<double>> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Gauss-Legendre in radius on [0, r_max] times a uniform angular rule;
/// w = r * w_GL * (2pi / n_theta) / pi, so sum w = r_max^2.
PhaseSpaceGrid make_grid(double r_max, int n_r, int n_theta);
PhaseSpaceGrid make_grid(const GridSpec& spec);

}  // namespace pntomo
