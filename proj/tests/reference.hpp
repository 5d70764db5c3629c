#pragma once

// Test-only reference computations. None of these go through the Chebyshev
// eigenvectors or the mode tables used by the library.

#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tch/inequality.hpp"

namespace tch::reference {

/// exp(i h t) from a numerical eigendecomposition of the tridiagonal hopping matrix.
inline Eigen::MatrixXcd propagator_by_eigensolver(const Params& p, double t) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(p.n_sites, p.n_sites);
  for (int i = 0; i < p.n_sites; ++i) {
    h(i, i) = -p.mu;
    if (i + 1 < p.n_sites) h(i, i + 1) = h(i + 1, i) = -p.coupling_j;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Eigen::VectorXcd phases(p.n_sites);
  for (int k = 0; k < p.n_sites; ++k) phases(k) = std::polar(1.0, es.eigenvalues()(k) * t);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<std::complex<double>>();
  return v * phases.asDiagonal() * v.transpose();
}

/// Two-site closed form of exp(i h t): G11 = G22 = e^{-iμt} cos Jt, G12 = G21 = -i e^{-iμt} sin Jt.
inline Eigen::Matrix2cd two_site_propagator(double j, double mu, double t) {
  const std::complex<double> phase = std::polar(1.0, -mu * t);
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd g;
  g(0, 0) = g(1, 1) = phase * std::cos(j * t);
  g(0, 1) = g(1, 0) = -i * phase * std::sin(j * t);
  return g;
}

inline double i_ch_from_matrix(const Eigen::MatrixXcd& g) {
  const auto n = g.rows();
  const auto gnn = g(n - 1, n - 1);
  const auto g1n = g(0, n - 1);
  return 0.5 + std::sqrt(2.0) / 4.0 * (std::norm(gnn) + std::norm(g1n) + gnn.real());
}

inline double i_ch_by_eigensolver(const Params& p, double t) { return i_ch_from_matrix(propagator_by_eigensolver(p, t)); }

}  // namespace tch::reference
