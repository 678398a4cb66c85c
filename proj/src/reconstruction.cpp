#include "pntomo/reconstruction.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pntomo/detail/closed_forms.hpp"
#include "pntomo/errors.hpp"

namespace pntomo {

namespace {

using LD = long double;
using CLD = std::complex<LD>;
using CMatLD = detail::CMat<LD>;

constexpr double kBoundaryTol = 1e-12;
constexpr int kFockSumCap = 512;
constexpr double kFockSumTol = 1e-10;

void require_s_below_one(double s) {
  if (!(s < 1.0)) {
    std::ostringstream os;
    os << "ordering parameter s = " << s << " must be < 1";
    throw ValidationError(os.str());
  }
}

template <class Real>
detail::CMat<Real> t_block(std::complex<Real> alpha, Real s, int dim) {
  if (s == Real(-1)) return detail::coherent_projector_block<Real>(alpha, dim);
  return detail::t_operator_block<Real>(alpha, s, dim);
}

}  // namespace

double KernelParams::base() const {
  const double d2 = delta * delta;
  return (eta * s * d2 - eta + 2.0) / (eta * s * d2 - eta);
}

double KernelParams::prefactor() const { return 2.0 / (1.0 - s * delta * delta); }

void KernelParams::validate_ranges() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("kernel eta must lie in (0, 1]");
  if (!(delta >= 1.0) || !std::isfinite(delta)) throw ValidationError("kernel delta must be >= 1");
  if (!std::isfinite(s)) throw ValidationError("kernel s must be finite");
}

std::string SInterval::str() const {
  std::ostringstream os;
  os.precision(12);
  os << "(" << lower << ", " << upper << "]";
  return os.str();
}

std::optional<SInterval> admissible_s_range(double eta, double delta) {
  KernelParams{0.0, eta, delta}.validate_ranges();
  const double upper = -(1.0 - eta) / (eta * delta * delta);
  if (!(upper > -1.0)) return std::nullopt;
  return SInterval{-1.0, upper};
}

double effective_efficiency(double eta, double delta) {
  KernelParams{0.0, eta, delta}.validate_ranges();
  if (delta == 1.0) return eta;  // the general form only rounds back to eta
  const double d2 = delta * delta;
  return d2 / (d2 + (1.0 - eta) / eta);
}

double default_s(double eta, double delta) {
  const auto range = admissible_s_range(eta, delta);
  if (!range) {
    std::ostringstream os;
    os << "no admissible s for eta = " << eta << ", Delta = " << delta
       << ": the interval (-1, -(1-eta)/(eta Delta^2)] is empty; squeezing with Delta^2 > (1-eta)/eta = "
       << (1.0 - eta) / eta << " is required";
    throw ValidationError(os.str());
  }
  return range->midpoint();
}

void require_admissible(const KernelParams& p) {
  p.validate_ranges();
  const auto range = admissible_s_range(p.eta, p.delta);
  if (!range) {
    default_s(p.eta, p.delta);  // throws with the required squeezing
  }
  if (!range->contains(p.s)) {
    std::ostringstream os;
    os << "s = " << p.s << " is not admissible for eta = " << p.eta << ", Delta = " << p.delta
       << "; admissible interval " << range->str();
    throw ValidationError(os.str());
  }
}

OperatorMatrix t_operator(Complex alpha, double s, int dim) {
  require_s_below_one(s);
  if (dim < 1) throw ValidationError("invalid dimension");
  return {t_block<double>(alpha, s, dim), {}};
}

OperatorMatrix t_operator_fock_sum(Complex alpha, double s, int dim) {
  require_s_below_one(s);
  if (dim < 1) throw ValidationError("invalid dimension");
  if (s == -1.0) return {detail::coherent_projector_block<double>(alpha, dim), {}};

  const double ratio = (s + 1.0) / (s - 1.0);
  const double front = 2.0 / (1.0 - s);
  int cutoff = dim + std::max(16, static_cast<int>(std::ceil(4.0 * std::norm(alpha))));
  int done = 0;
  CMatrix acc = CMatrix::Zero(dim, dim);
  for (;;) {
    if (cutoff > kFockSumCap) {
      std::ostringstream os;
      os << "T(" << alpha << ", " << s << ") photon sum did not settle below cutoff " << kFockSumCap;
      throw ConvergenceError(os.str());
    }
    const CMatrix d = detail::displacement_block<double>(alpha, dim, cutoff);
    CMatrix shell = CMatrix::Zero(dim, dim);
    for (int k = done; k < cutoff; ++k) {
      shell += (front * std::pow(ratio, k)) * d.col(k) * d.col(k).adjoint();
    }
    acc += shell;
    if (done > 0 && shell.cwiseAbs().maxCoeff() < kFockSumTol) break;
    done = cutoff;
    cutoff *= 2;
  }
  return {std::move(acc), {}};
}

OperatorMatrix kernel(int n, Complex alpha, const KernelParams& p, int dim) {
  if (n < 0) throw ValidationError("kernel photon number must be >= 0");
  require_admissible(p);
  const double scale = p.prefactor() * std::pow(p.base(), n);
  OperatorMatrix t = t_operator(-alpha / p.delta, -p.s, dim);
  t.entries *= scale;
  return t;
}

ReconstructionReport reconstruct(const MeasurementTable& table, const KernelParams& p,
                                 const PhaseSpaceGrid& grid, int dim) {
  if (dim < 1) throw ValidationError("invalid dimension");
  require_admissible(p);
  table.validate();
  if (table.alphas.size() != grid.size()) {
    throw ValidationError("table has " + std::to_string(table.alphas.size()) +
                          " reference amplitudes but the grid has " + std::to_string(grid.size()) +
                          " nodes");
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::abs(table.alphas[j] - grid.nodes[j]) > 1e-12 * (1.0 + std::abs(grid.nodes[j]))) {
      throw ValidationError("table reference amplitudes do not match the quadrature grid");
    }
  }
  if (std::abs(table.eta - p.eta) > 1e-12) {
    std::ostringstream os;
    os << "table efficiency " << table.eta << " differs from kernel efficiency " << p.eta;
    throw ValidationError(os.str());
  }
  if (std::abs(table.delta() - p.delta) > 1e-9 * p.delta) {
    std::ostringstream os;
    os << "table squeeze scale Delta = " << table.delta() << " differs from kernel Delta = " << p.delta;
    throw ValidationError(os.str());
  }

  std::vector<std::string> warnings = table.warnings;
  const LD base = LD(p.eta) * LD(p.s) * LD(p.delta) * LD(p.delta);
  const LD b = (base - LD(p.eta) + LD(2)) / (base - LD(p.eta));
  const LD front = LD(2) / (LD(1) - LD(p.s) * LD(p.delta) * LD(p.delta));
  const double abs_b = static_cast<double>(std::abs(b));
  if (abs_b >= 1.0 - kBoundaryTol) {
    std::ostringstream os;
    os << "s = " << p.s << " sits on the admissible boundary (|b| = 1): the photon sum does not decay";
    warnings.push_back(os.str());
  }

  CMatLD acc = CMatLD::Zero(dim, dim);
  double tail_bound = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const auto& probs = table.probs[j];
    LD coef = 0;
    LD power = 1;
    double p_max = 0.0;
    for (double pn : probs) {
      coef += LD(pn) * power;
      power *= b;
      p_max = std::max(p_max, pn);
    }
    coef *= front;
    const CLD beta = -CLD(grid.nodes[j]) / LD(p.delta);
    const CMatLD t = t_block<LD>(beta, -LD(p.s), dim);
    acc += (LD(grid.weights[j]) * coef) * t;
    tail_bound += grid.weights[j] * p_max * static_cast<double>(t.cwiseAbs().maxCoeff());
  }

  const CMatrix raw = acc.cast<Complex>();
  double trunc_err = std::numeric_limits<double>::infinity();
  if (abs_b < 1.0 - kBoundaryTol) {
    trunc_err = std::abs(static_cast<double>(front)) * std::pow(abs_b, table.n_max + 1) /
                (1.0 - abs_b) * tail_bound;
  }

  const double herm = hermiticity_defect(raw);
  CMatrix sym = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(sym);
  const Eigen::VectorXd& evals = eig.eigenvalues();
  const double min_eval = evals.minCoeff();
  double clipped = 0.0;
  Eigen::VectorXd kept(dim);
  for (int k = 0; k < dim; ++k) {
    kept(k) = std::max(evals(k), 0.0);
    if (evals(k) < 0.0) clipped += -evals(k);
  }
  const double kept_trace = kept.sum();
  if (!(kept_trace > 0.0)) {
    throw ValidationError("reconstruction has no positive spectrum left after clipping");
  }
  kept /= kept_trace;
  CMatrix repaired = eig.eigenvectors() * kept.asDiagonal() * eig.eigenvectors().adjoint();
  repaired = 0.5 * (repaired + repaired.adjoint()).eval();

  ReconstructionReport report{DensityMatrix(std::move(repaired), 0.0),
                              raw,
                              raw.trace().real(),
                              herm,
                              min_eval,
                              clipped,
                              trunc_err,
                              p,
                              grid.spec,
                              std::move(warnings)};
  return report;
}

ZeroCountDistribution q_from_zero_counts(const MeasurementTable& table) {
  table.validate();
  ZeroCountDistribution out;
  out.nodes = table.alphas;
  out.values.reserve(table.alphas.size());
  for (const auto& probs : table.probs) out.values.push_back(probs.at(0));

  if (!table.squeeze) {
    if (table.eta != 1.0) {
      std::ostringstream os;
      os << "zero-count route needs s = 1 - 2/eta = " << 1.0 - 2.0 / table.eta
         << ", which takes forbidden values (< -1) for eta = " << table.eta << " < 1 without squeezing";
      throw ValidationError(os.str());
    }
    out.s = -1.0;
    out.prefactor = 1.0;
    out.label = "Q(-alpha) = <-alpha|rho|-alpha>";
    return out;
  }

  const double d2 = table.delta() * table.delta();
  out.s = (1.0 - 2.0 / table.eta) / d2;
  if (!(out.s > -1.0)) {
    std::ostringstream os;
    os << "zero-count route with squeezing needs s = Delta^{-2}(1 - 2/eta) = " << out.s
       << " > -1; increase the squeezing";
    throw ValidationError(os.str());
  }
  out.prefactor = 2.0 / (1.0 - out.s * d2);
  out.label = "P_eta(0, alpha) at s = Delta^{-2}(1 - 2/eta)";
  return out;
}

}  // namespace pntomo
