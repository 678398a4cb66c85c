#pragma once

// Forward model: displaced photon counting with finite detector efficiency,
// optional squeeze kick before the reference field, optional shot noise.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pntomo/fock.hpp"
#include "pntomo/grid.hpp"

namespace pntomo {

/// Photon-count distribution P(0..n_max); tail_mass = 1 - sum P.
struct ProbabilityVector {
  std::vector<double> p;
  double tail_mass = 0.0;
  std::vector<std::string> warnings;
};

inline constexpr double kTailWarning = 0.01;

/// P(n) = <n| D(alpha) rho D^dag(alpha) |n>, n = 0..n_max. The displacement
/// elements come from the closed form, so any n_max is exact.
ProbabilityVector displaced_number_probabilities(const DensityMatrix& rho, Complex alpha, int n_max);

/// Binomial loss: P_eta(m) = sum_{n>=m} C(n,m) eta^m (1-eta)^{n-m} P(n).
/// The output has the input's length and the same total mass.
std::vector<double> apply_efficiency(std::span<const double> p, double eta);

struct EfficiencyInversion {
  std::vector<double> p;  ///< length n_max + 1; may hold small negative entries
  /// eta^{-n} sum_k C(n+k, n) ((1-eta)/eta)^k over the retained k, per n.
  std::vector<double> amplification_by_n;
  double amplification = 1.0;  ///< max over amplification_by_n
  std::vector<std::string> warnings;
};

/// P(n) = eta^{-n} sum_k (-1)^k C(n+k, n) ((1-eta)/eta)^k P_eta(n+k), with the
/// k-sum truncated at the end of the input vector.
EfficiencyInversion invert_efficiency(std::span<const double> p_eta, double eta, int n_max);

inline constexpr double kSqueezeLeakageTol = 1e-4;

/// S rho S^dag computed at a padded dimension and truncated to out_dim
/// (default: rho.dim()). Throws TruncationError if more than
/// kSqueezeLeakageTol of the trace falls outside out_dim.
DensityMatrix pre_squeeze(const DensityMatrix& rho, const SqueezeSpec& zeta, int out_dim = 0);

/// Squeezed copy of rho in a working space grown until less than `tolerance`
/// of the trace is lost.
DensityMatrix squeezed_in_working_space(const DensityMatrix& rho, const SqueezeSpec& zeta,
                                        double tolerance = 1e-13);

/// Multinomial draw over the bins of p; the missing mass 1 - sum p goes to
/// the overflow counter.
struct SampledCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t overflow = 0;
  std::uint64_t shots = 0;
};

SampledCounts sample_counts(std::span<const double> p, std::uint64_t shots, std::mt19937_64& rng);
SampledCounts sample_counts(std::span<const double> p, std::uint64_t shots, std::uint64_t seed);

/// P(n, alpha_j) for every grid node. In sampled mode `probs` holds the
/// observed frequencies count / shots and `counts` the raw counts.
struct MeasurementTable {
  std::vector<Complex> alphas;
  std::vector<std::vector<double>> probs;
  std::vector<std::vector<std::uint64_t>> counts;
  /// Exact mode: 1 - sum_n P. Sampled mode: overflow / shots.
  std::vector<double> tail_mass;
  double eta = 1.0;
  std::optional<SqueezeSpec> squeeze;
  std::optional<std::uint64_t> shots;
  int n_max = 0;
  GridSpec grid;
  std::vector<std::string> warnings;

  bool sampled() const { return shots.has_value(); }
  /// Squeeze scale of the forward model; 1 without squeezing.
  double delta() const { return squeeze ? squeeze->delta() : 1.0; }
  void validate() const;
};

struct TableOptions {
  double eta = 1.0;
  std::optional<SqueezeSpec> squeeze;
  int n_max = 0;
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
};

/// pre_squeeze -> displaced_number_probabilities -> apply_efficiency ->
/// optional sample_counts, node by node in grid order.
MeasurementTable build_table(const DensityMatrix& rho, const PhaseSpaceGrid& grid,
                             const TableOptions& options);

}  // namespace pntomo
