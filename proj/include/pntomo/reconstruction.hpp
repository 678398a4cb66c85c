#pragma once

// Density-matrix reconstruction from displaced photon-count tables.
//
// With ordering parameter s, efficiency eta and squeeze scale Delta the
// estimator is
//   rho = sum_n int d^2alpha/pi  P_eta(n, alpha) K(n, alpha),
//   K(n, alpha) = 2/(1 - s Delta^2) b^n T(-alpha/Delta, -s),
//   b = (eta s Delta^2 - eta + 2) / (eta s Delta^2 - eta),
// which reduces to the ideal-detector kernel for eta = Delta = 1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pntomo/fock.hpp"
#include "pntomo/grid.hpp"
#include "pntomo/measurement.hpp"

namespace pntomo {

struct KernelParams {
  double s = -0.5;
  double eta = 1.0;
  double delta = 1.0;

  /// b = (eta s Delta^2 - eta + 2) / (eta s Delta^2 - eta).
  double base() const;
  /// 2 / (1 - s Delta^2).
  double prefactor() const;
  void validate_ranges() const;
};

/// The half-open interval (lower, upper] of admissible s.
struct SInterval {
  double lower = -1.0;
  double upper = 0.0;

  /// The closed upper end tolerates a few ulps so that a boundary value
  /// computed as, say, -3.0 / 7.0 is not rejected by rounding in (1-eta)/eta.
  bool contains(double s) const {
    return s > lower && s <= upper + 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(upper));
  }
  double midpoint() const { return 0.5 * (lower + upper); }
  std::string str() const;
};

/// (-1, -(1-eta)/(eta Delta^2)] when the upper end exceeds -1, else nullopt.
std::optional<SInterval> admissible_s_range(double eta, double delta);

/// Delta^2 / (Delta^2 + (1 - eta)/eta).
double effective_efficiency(double eta, double delta);

/// Midpoint of the admissible interval. Throws ValidationError when the
/// interval is empty, naming the squeezing needed.
double default_s(double eta, double delta);

/// Throws ValidationError carrying the admissible interval when p.s is outside it.
void require_admissible(const KernelParams& p);

/// T(alpha, s) = 2/(1-s) D(alpha) ((s+1)/(s-1))^{a^dag a} D^dag(alpha), from the
/// normal-ordered closed form; s = -1 gives |alpha><alpha|. Throws for s >= 1.
OperatorMatrix t_operator(Complex alpha, double s, int dim);

/// Same operator by explicit photon summation with an internal cutoff that
/// doubles until the last shell adds < 1e-10 (max-norm), capped at 512.
/// Throws ConvergenceError past the cap. Only trustworthy while |alpha| and
/// |(s+1)/(s-1)| are moderate: for |ratio| > 1 the sum cancels catastrophically.
OperatorMatrix t_operator_fock_sum(Complex alpha, double s, int dim);

/// K(n, alpha) for admissible p.
OperatorMatrix kernel(int n, Complex alpha, const KernelParams& p, int dim);

struct ReconstructionReport {
  DensityMatrix rho_hat;
  CMatrix rho_raw;  ///< before symmetrization, clipping and renormalization
  double raw_trace = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue_before_clip = 0.0;
  double clipped_mass = 0.0;  ///< sum of the negative eigenvalues removed
  double n_truncation_error_estimate = 0.0;
  KernelParams params;
  GridSpec grid;
  std::vector<std::string> warnings;
};

/// rho_raw = sum_j w_j sum_{n <= n_max} P(n, alpha_j) K(n, alpha_j), then
/// symmetrize, clip negative eigenvalues and renormalize; every repair is
/// recorded in the report.
ReconstructionReport reconstruct(const MeasurementTable& table, const KernelParams& p,
                                 const PhaseSpaceGrid& grid, int dim);

/// Zero-count probabilities at the grid nodes, the special case in which only
/// the n = 0 kernel term survives.
///   eta = 1, no squeezing: s = -1 and P(0, alpha) = Q(-alpha) = <-alpha|rho|-alpha>.
///   squeezing: s = Delta^{-2}(1 - 2/eta) (must exceed -1); the density matrix
///   is then sum_j w_j prefactor P_eta(0, alpha_j) T(-alpha_j/Delta, -s).
struct ZeroCountDistribution {
  std::vector<Complex> nodes;
  std::vector<double> values;
  double s = -1.0;
  double prefactor = 1.0;
  std::string label;
};

ZeroCountDistribution q_from_zero_counts(const MeasurementTable& table);

}  // namespace pntomo
