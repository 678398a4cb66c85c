#pragma once

// Truncated Fock-space states and operators.

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <variant>
#include <vector>

namespace pntomo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// A dim x dim operator in the basis |0>..|dim-1>, plus any truncation
/// warnings raised while building it.
struct OperatorMatrix {
  CMatrix entries;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(entries.rows()); }
};

/// Squeeze parameter zeta = magnitude * e^{i phase}.
struct SqueezeSpec {
  double magnitude = 0.0;
  double phase = 0.0;

  /// Delta = e^{|zeta|}.
  double delta() const;
  Complex zeta() const;
  bool is_identity() const { return magnitude == 0.0; }
  void validate() const;
};

namespace state {
struct Fock {
  int n = 0;
};
struct Coherent {
  Complex beta;
};
struct Thermal {
  double nbar = 0.0;
};
/// |beta> + e^{i parity_phase} |-beta>, normalized. parity_phase = 0 is the even cat.
struct Cat {
  Complex beta;
  double parity_phase = 0.0;
};
struct SqueezedVacuum {
  SqueezeSpec zeta;
};
}  // namespace state

using StateSpec =
    std::variant<state::Fock, state::Coherent, state::Thermal, state::Cat, state::SqueezedVacuum>;

void validate(const StateSpec& spec);
std::string describe(const StateSpec& spec);
/// Largest coherent amplitude present in the state (0 for number/thermal states).
double max_amplitude(const StateSpec& spec);

/// Validated density matrix. Construction checks hermiticity, the trace window
/// [1 - leakage, 1] and positivity; the object is immutable afterwards.
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kPsdTol = 1e-10;
  static constexpr double kTraceSlack = 1e-10;

  /// Throws ValidationError when `entries` is not a valid state with at most
  /// `leakage` trace missing.
  DensityMatrix(CMatrix entries, double leakage);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const CMatrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }
  double leakage() const { return leakage_; }
  double trace() const { return entries_.trace().real(); }
  double purity() const;
  std::vector<double> populations() const;

 private:
  CMatrix entries_;
  double leakage_;
};

/// Pure state |psi><psi|; leakage = 1 - ||psi||^2.
DensityMatrix pure_state(const CVector& amplitudes);

OperatorMatrix annihilation_operator(int dim);
OperatorMatrix number_operator(int dim);

/// <m|D(alpha)|n> for m, n < dim from the Laguerre closed form. Flags severe
/// truncation when |alpha|^2 > dim.
OperatorMatrix displacement_operator(Complex alpha, int dim);

/// Padded working dimension used when building S(zeta) or S rho S^dag.
int squeeze_padding(const SqueezeSpec& zeta);

/// Block <m|S(zeta)|n>, m < rows, n < cols, of the infinite squeeze operator.
/// Each element is a finite sum, so no truncation enters.
CMatrix squeeze_block(const SqueezeSpec& zeta, int rows, int cols);

/// S(zeta) = exp[(zeta^* a^2 - zeta a^dag^2) / 2] truncated to dim.
OperatorMatrix squeeze_operator(const SqueezeSpec& zeta, int dim);

/// Maximum trace leakage accepted by build_state.
inline constexpr double kStateLeakageTol = 1e-6;

/// Normalized test state truncated to dim. Throws TruncationError (with the
/// smallest sufficient dim) when more than kStateLeakageTol is lost.
DensityMatrix build_state(const StateSpec& spec, int dim);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);
/// 1/2 ||rho - sigma||_1.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// max |m_ij - conj(m_ji)|.
double hermiticity_defect(const CMatrix& m);

}  // namespace pntomo
