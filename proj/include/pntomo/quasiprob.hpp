#pragma once

// s-parametrized weight functions and characteristic functions.
//
// Normalization follows T(alpha, s): W(alpha, s) = Tr{rho T(alpha, s)}, so
// int d^2alpha/pi W = 1 and the vacuum Wigner value at the origin is 2 (not
// the 1/pi textbook convention).

#include <span>
#include <vector>

#include "pntomo/fock.hpp"

namespace pntomo {

struct WeightValue {
  double value = 0.0;
  double imag_defect = 0.0;  ///< |Im Tr{rho T}|, zero up to rounding
};

/// W(alpha, s) = Tr{rho T(alpha, s)} for s < 1; s = -1 gives <alpha|rho|alpha>.
WeightValue weight_function(const DensityMatrix& rho, Complex alpha, double s);

/// chi(xi, s) = Tr{rho D(xi)} e^{s|xi|^2/2}.
Complex characteristic_function(const DensityMatrix& rho, Complex xi, double s);

struct SqueezeScalingCheck {
  /// max_j |chi_rho(xi_j, s) - chi_rhotilde(xi_j/Delta, s Delta^2)| with the
  /// squeeze phase locked to 2 arg(xi_j) for each sample.
  double locked_deviation = 0.0;
  /// max_j |chi_rhotilde(xi_j, s) - chi_rho(xi_j mu^* + xi_j^* nu, 0) e^{s|xi_j|^2/2}|
  /// for the fixed squeeze phase given in zeta.
  double general_deviation = 0.0;
};

/// rhotilde = S(zeta) rho S^dag(zeta), mu = cosh|zeta|, nu = e^{i phase} sinh|zeta|.
SqueezeScalingCheck verify_squeeze_scaling(const DensityMatrix& rho, const SqueezeSpec& zeta,
                                           std::span<const Complex> xi_samples, double s);

}  // namespace pntomo
