#pragma once

// Closed-form Fock-basis matrix elements built on generalized Laguerre
// polynomials. Templated on the real type so the reconstruction path can run
// in extended precision; the public API instantiates them with double.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace pntomo::detail {

template <class Real>
using CMat = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// L_k^{(a)}(x) for k = 0..count-1 by the forward three-term recurrence.
template <class Real>
std::vector<Real> laguerre_sequence(int count, int a, Real x) {
  std::vector<Real> out(static_cast<std::size_t>(count));
  if (count == 0) return out;
  out[0] = Real(1);
  if (count == 1) return out;
  out[1] = Real(1 + a) - x;
  for (int k = 1; k + 1 < count; ++k) {
    out[k + 1] = ((Real(2 * k + 1 + a) - x) * out[k] - Real(k + a) * out[k - 1]) /
                 Real(k + 1);
  }
  return out;
}

template <class Real>
Real log_factorial(int n) {
  return std::lgamma(Real(n) + Real(1));
}

/// Rectangular block <m|D(alpha)|n>, 0 <= m < rows, 0 <= n < cols, of the
/// infinite displacement operator exp(alpha a^dag - alpha^* a).
///   m >= n: sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)
///   m <  n: sqrt(m!/n!) (-alpha^*)^{n-m} e^{-|alpha|^2/2} L_m^{(n-m)}(|alpha|^2)
template <class Real>
CMat<Real> displacement_block(std::complex<Real> alpha, int rows, int cols) {
  using C = std::complex<Real>;
  CMat<Real> out = CMat<Real>::Zero(rows, cols);
  const Real x = std::norm(alpha);
  const Real r = std::abs(alpha);
  if (r == Real(0)) {
    for (int k = 0; k < std::min(rows, cols); ++k) out(k, k) = C(1);
    return out;
  }
  const Real log_r = std::log(r);
  const Real phase = std::arg(alpha);
  const Real gauss = -x / Real(2);

  // Lower triangle including the diagonal: offset a = m - n >= 0.
  for (int a = 0; a < rows; ++a) {
    const int count = std::min(cols, rows - a);
    if (count <= 0) break;
    const auto lag = laguerre_sequence<Real>(count, a, x);
    const C unit = std::polar(Real(1), Real(a) * phase);
    for (int n = 0; n < count; ++n) {
      const int m = n + a;
      const Real log_mag = Real(0.5) * (log_factorial<Real>(n) - log_factorial<Real>(m)) +
                           Real(a) * log_r + gauss;
      out(m, n) = unit * (std::exp(log_mag) * lag[n]);
    }
  }
  // Strict upper triangle: offset a = n - m > 0, factor (-alpha^*)^a.
  for (int a = 1; a < cols; ++a) {
    const int count = std::min(rows, cols - a);
    if (count <= 0) break;
    const auto lag = laguerre_sequence<Real>(count, a, x);
    const C unit = std::polar(Real(1), Real(a) * (Real(M_PI) - phase));
    for (int m = 0; m < count; ++m) {
      const int n = m + a;
      const Real log_mag = Real(0.5) * (log_factorial<Real>(m) - log_factorial<Real>(n)) +
                           Real(a) * log_r + gauss;
      out(m, n) = unit * (std::exp(log_mag) * lag[m]);
    }
  }
  return out;
}

/// Leading dim x dim block of
///   T(beta, s) = 2/(1-s) D(beta) ((s+1)/(s-1))^{a^dag a} D^dag(beta)
/// for s < 1, s != -1. Normal ordering turns the infinite photon sum into
///   <m|T|n> = 2/(1-s) e^{-2|beta|^2/(1-s)} t^n x^{m-n} sqrt(n!/m!)
///             L_n^{(m-n)}(4|beta|^2/(1-s^2)),   m >= n,
/// with t = (s+1)/(s-1), x = 2 beta/(1-s). The upper triangle follows from
/// hermiticity.
template <class Real>
CMat<Real> t_operator_block(std::complex<Real> beta, Real s, int dim) {
  using C = std::complex<Real>;
  CMat<Real> out = CMat<Real>::Zero(dim, dim);
  const Real one_minus_s = Real(1) - s;
  const Real t = (s + Real(1)) / (s - Real(1));
  const Real log_abs_t = std::log(std::abs(t));
  const bool t_negative = t < Real(0);
  const Real x_abs = Real(2) * std::abs(beta) / one_minus_s;
  const Real lag_arg = Real(4) * std::norm(beta) / ((Real(1) - s) * (Real(1) + s));
  const Real log_front = std::log(Real(2) / one_minus_s) - Real(2) * std::norm(beta) / one_minus_s;
  const Real phase = std::arg(beta);

  for (int a = 0; a < dim; ++a) {
    if (a > 0 && x_abs == Real(0)) break;
    const int count = dim - a;
    const auto lag = laguerre_sequence<Real>(count, a, lag_arg);
    const Real log_x = a > 0 ? Real(a) * std::log(x_abs) : Real(0);
    const C unit = std::polar(Real(1), Real(a) * phase);
    for (int n = 0; n < count; ++n) {
      const int m = n + a;
      const Real log_mag = log_front + Real(n) * log_abs_t + log_x +
                           Real(0.5) * (log_factorial<Real>(n) - log_factorial<Real>(m));
      Real mag = std::exp(log_mag) * lag[n];
      if (t_negative && (n % 2 == 1)) mag = -mag;
      out(m, n) = unit * mag;
      if (a > 0) out(n, m) = std::conj(out(m, n));
    }
  }
  return out;
}

/// The s = -1 limit of T: the coherent-state projector |beta><beta|.
template <class Real>
CMat<Real> coherent_projector_block(std::complex<Real> beta, int dim) {
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1> v(dim);
  const Real gauss = -std::norm(beta) / Real(2);
  const Real r = std::abs(beta);
  for (int k = 0; k < dim; ++k) {
    if (r == Real(0)) {
      v(k) = k == 0 ? std::complex<Real>(std::exp(gauss)) : std::complex<Real>(0);
      continue;
    }
    const Real log_mag = gauss + Real(k) * std::log(r) - Real(0.5) * log_factorial<Real>(k);
    v(k) = std::polar(std::exp(log_mag), Real(k) * std::arg(beta));
  }
  return v * v.adjoint();
}

}  // namespace pntomo::detail
