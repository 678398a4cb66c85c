#include "pntomo/quasiprob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pntomo/detail/closed_forms.hpp"
#include "pntomo/errors.hpp"
#include "pntomo/measurement.hpp"
#include "pntomo/reconstruction.hpp"

namespace pntomo {

WeightValue weight_function(const DensityMatrix& rho, Complex alpha, double s) {
  const CMatrix t = t_operator(alpha, s, rho.dim()).entries;
  const Complex w = (rho.matrix() * t).trace();
  return {w.real(), std::abs(w.imag())};
}

Complex characteristic_function(const DensityMatrix& rho, Complex xi, double s) {
  // Tr{rho D} only sees the leading block of D, which the closed form gives
  // exactly.
  const CMatrix d = detail::displacement_block<double>(xi, rho.dim(), rho.dim());
  return (rho.matrix() * d).trace() * std::exp(0.5 * s * std::norm(xi));
}

SqueezeScalingCheck verify_squeeze_scaling(const DensityMatrix& rho, const SqueezeSpec& zeta,
                                           std::span<const Complex> xi_samples, double s) {
  zeta.validate();
  SqueezeScalingCheck out;
  const double r = zeta.magnitude;
  const double delta = zeta.delta();
  const double mu = std::cosh(r);
  const Complex nu = std::polar(std::sinh(r), zeta.phase);

  const DensityMatrix fixed = squeezed_in_working_space(rho, zeta);
  for (const Complex& xi : xi_samples) {
    double locked_phase = std::fmod(2.0 * std::arg(xi), 2.0 * std::numbers::pi);
    if (locked_phase < 0.0) locked_phase += 2.0 * std::numbers::pi;
    const DensityMatrix kicked = squeezed_in_working_space(rho, {r, locked_phase});
    const Complex lhs = characteristic_function(rho, xi, s);
    const Complex rhs = characteristic_function(kicked, xi / delta, s * delta * delta);
    out.locked_deviation = std::max(out.locked_deviation, std::abs(lhs - rhs));

    const Complex tilde = characteristic_function(fixed, xi, s);
    const Complex mapped = xi * mu + std::conj(xi) * nu;
    const Complex direct = characteristic_function(rho, mapped, 0.0) * std::exp(0.5 * s * std::norm(xi));
    out.general_deviation = std::max(out.general_deviation, std::abs(tilde - direct));
  }
  return out;
}

}  // namespace pntomo
