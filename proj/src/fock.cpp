#include "pntomo/fock.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pntomo/detail/closed_forms.hpp"
#include "pntomo/errors.hpp"

namespace pntomo {

namespace {

void require_dim(int dim, int minimum = 1) {
  if (dim < minimum) {
    throw ValidationError("invalid dimension " + std::to_string(dim) + " (need >= " +
                          std::to_string(minimum) + ")");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

CVector coherent_amplitudes(Complex beta, int dim) {
  CVector v(dim);
  const double r = std::abs(beta);
  const double gauss = -0.5 * std::norm(beta);
  for (int k = 0; k < dim; ++k) {
    if (r == 0.0) {
      v(k) = k == 0 ? Complex(1.0) : Complex(0.0);
      continue;
    }
    const double log_mag = gauss + k * std::log(r) - 0.5 * std::lgamma(k + 1.0);
    v(k) = std::polar(std::exp(log_mag), k * std::arg(beta));
  }
  return v;
}

CVector cat_amplitudes(const state::Cat& cat, int dim) {
  const Complex rel = std::polar(1.0, cat.parity_phase);
  const double norm2 = 2.0 + 2.0 * std::cos(cat.parity_phase) * std::exp(-2.0 * std::norm(cat.beta));
  if (norm2 < 1e-14) {
    throw ValidationError("cat state with beta = 0 and odd parity phase has zero norm");
  }
  CVector v = coherent_amplitudes(cat.beta, dim);
  for (int k = 0; k < dim; ++k) {
    v(k) *= (1.0 + rel * (k % 2 == 0 ? 1.0 : -1.0)) / std::sqrt(norm2);
  }
  return v;
}

// S(zeta)|0> = (cosh r)^{-1/2} sum_k (-e^{i phi} tanh r)^k sqrt((2k)!)/(2^k k!) |2k>
CVector squeezed_vacuum_amplitudes(const SqueezeSpec& z, int dim) {
  CVector v = CVector::Zero(dim);
  const double r = z.magnitude;
  const double front = -0.5 * std::log(std::cosh(r));
  const double th = std::tanh(r);
  for (int k = 0; 2 * k < dim; ++k) {
    if (k > 0 && th == 0.0) break;
    const double log_mag = front + (k > 0 ? k * std::log(th) : 0.0) +
                           0.5 * std::lgamma(2.0 * k + 1.0) - k * std::log(2.0) -
                           std::lgamma(k + 1.0);
    v(2 * k) = std::polar(std::exp(log_mag), k * (z.phase + std::numbers::pi));
  }
  return v;
}

double thermal_leakage(double nbar, int dim) {
  if (nbar == 0.0) return 0.0;
  return std::pow(nbar / (1.0 + nbar), dim);
}

double state_leakage(const StateSpec& spec, int dim) {
  return std::visit(
      Overloaded{
          [&](const state::Fock& f) { return f.n < dim ? 0.0 : 1.0; },
          [&](const state::Coherent& c) {
            return std::max(0.0, 1.0 - coherent_amplitudes(c.beta, dim).squaredNorm());
          },
          [&](const state::Thermal& t) { return thermal_leakage(t.nbar, dim); },
          [&](const state::Cat& c) {
            return std::max(0.0, 1.0 - cat_amplitudes(c, dim).squaredNorm());
          },
          [&](const state::SqueezedVacuum& s) {
            return std::max(0.0, 1.0 - squeezed_vacuum_amplitudes(s.zeta, dim).squaredNorm());
          },
      },
      spec);
}

}  // namespace

double SqueezeSpec::delta() const { return std::exp(magnitude); }

Complex SqueezeSpec::zeta() const { return std::polar(magnitude, phase); }

void SqueezeSpec::validate() const {
  if (!(magnitude >= 0.0) || !std::isfinite(magnitude)) {
    throw ValidationError("squeeze magnitude must be finite and >= 0");
  }
  if (!(phase >= 0.0 && phase < 2.0 * std::numbers::pi)) {
    throw ValidationError("squeeze phase must lie in [0, 2pi)");
  }
}

void validate(const StateSpec& spec) {
  std::visit(Overloaded{
                 [](const state::Fock& f) {
                   if (f.n < 0) throw ValidationError("fock: n must be >= 0");
                 },
                 [](const state::Coherent&) {},
                 [](const state::Thermal& t) {
                   if (!(t.nbar >= 0.0)) throw ValidationError("thermal: nbar must be >= 0");
                 },
                 [](const state::Cat& c) {
                   if (!(c.parity_phase >= 0.0 && c.parity_phase < 2.0 * std::numbers::pi)) {
                     throw ValidationError("cat: parity phase must lie in [0, 2pi)");
                   }
                 },
                 [](const state::SqueezedVacuum& s) { s.zeta.validate(); },
             },
             spec);
}

std::string describe(const StateSpec& spec) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const state::Fock& f) { os << "fock(" << f.n << ")"; },
                 [&](const state::Coherent& c) { os << "coherent(" << c.beta << ")"; },
                 [&](const state::Thermal& t) { os << "thermal(" << t.nbar << ")"; },
                 [&](const state::Cat& c) {
                   os << "cat(" << c.beta << ", " << c.parity_phase << ")";
                 },
                 [&](const state::SqueezedVacuum& s) {
                   os << "squeezed_vacuum(" << s.zeta.magnitude << ", " << s.zeta.phase << ")";
                 },
             },
             spec);
  return os.str();
}

double max_amplitude(const StateSpec& spec) {
  return std::visit(Overloaded{
                        [](const state::Coherent& c) { return std::abs(c.beta); },
                        [](const state::Cat& c) { return std::abs(c.beta); },
                        [](const auto&) { return 0.0; },
                    },
                    spec);
}

double hermiticity_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(CMatrix entries, double leakage)
    : entries_(std::move(entries)), leakage_(std::max(0.0, leakage)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw ValidationError("density matrix must be square with dim >= 1");
  }
  if (!entries_.allFinite()) throw ValidationError("density matrix has non-finite entries");
  const double herm = hermiticity_defect(entries_);
  if (herm > kHermitianTol) {
    throw ValidationError("density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const double tr = trace();
  if (tr > 1.0 + kTraceSlack || tr < 1.0 - leakage_ - kTraceSlack) {
    std::ostringstream os;
    os << "density matrix trace " << tr << " outside [" << 1.0 - leakage_ << ", 1]";
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(entries_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -kPsdTol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << eig.eigenvalues().minCoeff();
    throw ValidationError(os.str());
  }
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> p(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) p[k] = entries_(k, k).real();
  return p;
}

DensityMatrix pure_state(const CVector& amplitudes) {
  CMatrix m = amplitudes * amplitudes.adjoint();
  // Outer products are Hermitian only up to rounding in the off-diagonal
  // products; enforce it exactly.
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(std::move(m), 1.0 - amplitudes.squaredNorm());
}

OperatorMatrix annihilation_operator(int dim) {
  require_dim(dim);
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {std::move(a), {}};
}

OperatorMatrix number_operator(int dim) {
  require_dim(dim);
  CMatrix n = CMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
  return {std::move(n), {}};
}

OperatorMatrix displacement_operator(Complex alpha, int dim) {
  require_dim(dim);
  OperatorMatrix out{detail::displacement_block<double>(alpha, dim, dim), {}};
  if (std::norm(alpha) > dim) {
    std::ostringstream os;
    os << "displacement |alpha|^2 = " << std::norm(alpha) << " exceeds dim " << dim
       << ": the truncated matrix is far from unitary";
    out.warnings.push_back(os.str());
  }
  return out;
}

int squeeze_padding(const SqueezeSpec& zeta) {
  return std::max(16, static_cast<int>(std::ceil(4.0 * std::exp(2.0 * zeta.magnitude))));
}

CMatrix squeeze_block(const SqueezeSpec& zeta, int rows, int cols) {
  // Disentangled form
  //   S = exp(-e^{i phi} tanh r a^dag^2 / 2) (cosh r)^{-(a^dag a + 1/2)} exp(e^{-i phi} tanh r a^2 / 2)
  // gives <m|S|n> as a finite sum over the k photons that pass the middle factor.
  using LD = long double;
  zeta.validate();
  CMatrix out = CMatrix::Zero(rows, cols);
  if (zeta.magnitude == 0.0) {
    for (int k = 0; k < std::min(rows, cols); ++k) out(k, k) = 1.0;
    return out;
  }
  const LD r = zeta.magnitude;
  const LD phi = zeta.phase;
  const LD log_half_tanh = std::log(std::tanh(r) / 2.0L);
  const LD log_cosh = std::log(std::cosh(r));
  const int top = std::max(rows, cols);
  std::vector<LD> lf(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) lf[k] = std::lgamma(static_cast<LD>(k) + 1.0L);

  for (int m = 0; m < rows; ++m) {
    for (int n = m % 2; n < cols; n += 2) {
      std::complex<LD> sum = 0.0L;
      for (int k = m % 2; k <= std::min(m, n); k += 2) {
        const int j = (m - k) / 2;
        const int l = (n - k) / 2;
        const LD log_mag = 0.5L * (lf[m] + lf[n]) - 0.5L * log_cosh + (j + l) * log_half_tanh - lf[j] -
                           lf[l] - k * log_cosh - lf[k];
        const LD sign = (j % 2 == 0) ? 1.0L : -1.0L;
        sum += std::polar(sign * std::exp(log_mag), phi * static_cast<LD>(j - l));
      }
      out(m, n) = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
  }
  return out;
}

OperatorMatrix squeeze_operator(const SqueezeSpec& zeta, int dim) {
  require_dim(dim, 2);
  zeta.validate();
  if (zeta.is_identity()) return {CMatrix::Identity(dim, dim), {}};

  OperatorMatrix out{squeeze_block(zeta, dim, dim), {}};
  if (std::exp(2.0 * zeta.magnitude) > dim) {
    std::ostringstream os;
    os << "squeeze e^{2|zeta|} = " << std::exp(2.0 * zeta.magnitude) << " exceeds dim " << dim;
    out.warnings.push_back(os.str());
  }
  return out;
}

DensityMatrix build_state(const StateSpec& spec, int dim) {
  require_dim(dim);
  validate(spec);
  const double leak = state_leakage(spec, dim);
  if (leak > kStateLeakageTol) {
    int required = dim;
    while (required < 4096 && state_leakage(spec, required) > kStateLeakageTol) {
      required = std::max(required + 1, static_cast<int>(required * 1.25));
    }
    while (required > dim + 1 && state_leakage(spec, required - 1) <= kStateLeakageTol) --required;
    std::ostringstream os;
    os << describe(spec) << " loses " << leak << " of its trace at dim " << dim << "; need dim >= "
       << required;
    throw TruncationError(os.str(), required);
  }

  return std::visit(
      Overloaded{
          [&](const state::Fock& f) {
            CVector v = CVector::Zero(dim);
            v(f.n) = 1.0;
            return pure_state(v);
          },
          [&](const state::Coherent& c) { return pure_state(coherent_amplitudes(c.beta, dim)); },
          [&](const state::Thermal& t) {
            CMatrix m = CMatrix::Zero(dim, dim);
            for (int k = 0; k < dim; ++k) {
              m(k, k) = t.nbar == 0.0 ? (k == 0 ? 1.0 : 0.0)
                                      : std::pow(t.nbar, k) / std::pow(1.0 + t.nbar, k + 1);
            }
            return DensityMatrix(std::move(m), leak);
          },
          [&](const state::Cat& c) { return pure_state(cat_amplitudes(c, dim)); },
          [&](const state::SqueezedVacuum& s) {
            return pure_state(squeezed_vacuum_amplitudes(s.zeta, dim));
          },
      },
      spec);
}

namespace {

// Square roots of eigenvalues at rounding level would add O(sqrt(eps)) noise.
Eigen::VectorXd floored_roots(const Eigen::VectorXd& values) {
  const double floor = 64.0 * values.size() * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, values.cwiseAbs().maxCoeff());
  return values.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(m);
  const Eigen::VectorXd roots = floored_roots(eig.eigenvalues());
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

void require_same_dim(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()));
  }
}

}  // namespace

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  const CMatrix root = psd_sqrt(rho.matrix());
  CMatrix inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(inner, Eigen::EigenvaluesOnly);
  const double tr = floored_roots(eig.eigenvalues()).sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_dim(rho, sigma);
  CMatrix diff = rho.matrix() - sigma.matrix();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(diff, Eigen::EigenvaluesOnly);
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

}  // namespace pntomo
