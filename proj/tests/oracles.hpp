#pragma once

// Independent reference computations used only by the tests. Nothing here
// shares code with the library's closed forms.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <vector>

#include "pntomo/fock.hpp"

namespace pntomo::oracle {

inline CMatrix ladder(int dim) {
  CMatrix a = CMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

/// exp(alpha a^dag - alpha^* a) at `padded`, leading dim x dim block.
inline CMatrix displacement_expm(Complex alpha, int dim, int padded) {
  const CMatrix a = ladder(padded);
  const CMatrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return gen.exp().topLeftCorner(dim, dim);
}

/// exp[(zeta^* a^2 - zeta a^dag^2)/2] at `padded`, leading dim x dim block.
inline CMatrix squeeze_expm(Complex zeta, int dim, int padded) {
  const CMatrix a = ladder(padded);
  const CMatrix a2 = a * a;
  const CMatrix gen = 0.5 * (std::conj(zeta) * a2 - zeta * a2.adjoint());
  return gen.exp().topLeftCorner(dim, dim);
}

inline double factorial(int n) { return std::tgamma(n + 1.0); }

/// Coherent amplitudes e^{-|b|^2/2} b^n / sqrt(n!).
inline CVector coherent_vector(Complex beta, int dim) {
  CVector v(dim);
  for (int n = 0; n < dim; ++n) {
    v(n) = std::exp(-0.5 * std::norm(beta)) * std::pow(beta, n) / std::sqrt(factorial(n));
  }
  return v;
}

/// <m| :(eta n)^k e^{-eta n}/k!: |m> from the normal-ordered series
/// sum_j (-eta)^j eta^k / (k! j!) m!/(m-k-j)!, then contracted against p.
inline std::vector<double> normal_ordered_smear(const std::vector<double>& p, double eta) {
  const int len = static_cast<int>(p.size());
  std::vector<double> out(len, 0.0);
  for (int k = 0; k < len; ++k) {
    for (int m = k; m < len; ++m) {
      double elem = 0.0;
      for (int j = 0; k + j <= m; ++j) {
        elem += std::pow(-eta, j) * std::pow(eta, k) / (factorial(k) * factorial(j)) * factorial(m) /
                factorial(m - k - j);
      }
      out[k] += elem * p[m];
    }
  }
  return out;
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace pntomo::oracle
