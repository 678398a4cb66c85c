#include "pntomo/grid.hpp"

#include <cmath>
#include <numbers>

#include "pntomo/errors.hpp"

namespace pntomo {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess for the i-th largest root, then Newton.
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double deriv = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      deriv = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / deriv;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    deriv = n * (z * p1 - p0) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * deriv * deriv);
    nodes[n - 1 - i] = z;
    nodes[i] = -z;
    weights[n - 1 - i] = w;
    weights[i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

PhaseSpaceGrid make_grid(double r_max, int n_r, int n_theta) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw ValidationError("grid r_max must be > 0");
  if (n_r < 2) throw ValidationError("grid n_r must be >= 2");
  if (n_theta < 4) throw ValidationError("grid n_theta must be >= 4");

  std::vector<double> x;
  std::vector<double> wx;
  gauss_legendre(n_r, x, wx);

  PhaseSpaceGrid grid;
  grid.spec = {r_max, n_r, n_theta};
  grid.nodes.reserve(static_cast<std::size_t>(n_r) * n_theta);
  grid.weights.reserve(grid.nodes.capacity());
  const double dtheta = 2.0 * std::numbers::pi / n_theta;
  for (int i = 0; i < n_r; ++i) {
    const double r = 0.5 * r_max * (x[i] + 1.0);
    const double w_r = 0.5 * r_max * wx[i];
    for (int k = 0; k < n_theta; ++k) {
      grid.nodes.push_back(std::polar(r, k * dtheta));
      grid.weights.push_back(r * w_r * dtheta / std::numbers::pi);
    }
  }
  return grid;
}

PhaseSpaceGrid make_grid(const GridSpec& spec) { return make_grid(spec.r_max, spec.n_r, spec.n_theta); }

}  // namespace pntomo
