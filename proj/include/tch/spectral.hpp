#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tch/chain.hpp"

namespace tch {

/// One single-particle mode of the open chain, k_m = pi m / (N + 1).
template <typename Scalar = double>
struct Mode {
  int index_m = 1;
  Scalar momentum_k = Scalar(0);
  Scalar lambda_k = Scalar(0);   // cos(k)
  Scalar epsilon_k = Scalar(0);  // -2 J lambda_k - mu
};

template <typename Scalar = double>
std::vector<Mode<Scalar>> build_modes(const ChainParams<Scalar>& params) {
  params.validate();
  const int n = params.n_sites;
  std::vector<Mode<Scalar>> modes;
  modes.reserve(static_cast<std::size_t>(n));
  for (int m = 1; m <= n; ++m) {
    Mode<Scalar> mode;
    mode.index_m = m;
    mode.momentum_k = pi_v<Scalar> * Scalar(m) / Scalar(n + 1);
    mode.lambda_k = std::cos(mode.momentum_k);
    mode.epsilon_k = Scalar(-2) * params.coupling_j * mode.lambda_k - params.mu;
    modes.push_back(mode);
  }
  return modes;
}

/// U_n(cos k) = sin((n+1)k) / sin(k) for k in (0, pi).
template <typename Scalar>
Scalar chebyshev_u_at_angle(int order, Scalar angle) {
  return std::sin(Scalar(order + 1) * angle) / std::sin(angle);
}

/// Three-term recurrence U_{n+1} = 2 lambda U_n - U_{n-1}. Cross-check only.
template <typename Scalar>
Scalar chebyshev_u_recurrence(int order, Scalar lambda) {
  if (order < 0) throw std::invalid_argument("Chebyshev order must be nonnegative");
  Scalar prev = Scalar(1);
  if (order == 0) return prev;
  Scalar cur = Scalar(2) * lambda;
  for (int n = 1; n < order; ++n) {
    const Scalar next = Scalar(2) * lambda * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Chebyshev polynomial of the second kind U_n(lambda), |lambda| <= 1.
template <typename Scalar>
Scalar chebyshev_u(int order, Scalar lambda) {
  if (order < 0) throw std::invalid_argument("Chebyshev order must be nonnegative");
  if (!(std::abs(lambda) <= Scalar(1)))
    throw std::domain_error("chebyshev_u: |lambda| must not exceed 1");
  // Sine quotient is ill-conditioned at the band edges.
  if (Scalar(1) - std::abs(lambda) < Scalar(1e-8)) return chebyshev_u_recurrence(order, lambda);
  return chebyshev_u_at_angle(order, std::acos(lambda));
}

/// Tridiagonal single-particle matrix: -J on the first off-diagonals, -mu on the diagonal.
template <typename Scalar = double>
MatrixX<Scalar> single_particle_hamiltonian(const ChainParams<Scalar>& params) {
  params.validate();
  const int n = params.n_sites;
  MatrixX<Scalar> h = MatrixX<Scalar>::Zero(n, n);
  h.diagonal().setConstant(-params.mu);
  h.diagonal(1).setConstant(-params.coupling_j);
  h.diagonal(-1).setConstant(-params.coupling_j);
  return h;
}

template <typename Scalar = double>
struct SingleParticleBasis {
  ChainParams<Scalar> params;
  Convention convention = Convention::plain;
  // u(j, m) = u_{j k_m}, zero-based rows and columns.
  MatrixX<Scalar> u;
};

/// Normalized Chebyshev eigenvectors. Columns are divided by their computed norm.
template <typename Scalar = double>
SingleParticleBasis<Scalar> eigenbasis(const ChainParams<Scalar>& params, Convention convention) {
  const auto modes = build_modes(params);
  const int n = params.n_sites;
  SingleParticleBasis<Scalar> basis{params, convention, MatrixX<Scalar>(n, n)};
  for (int m = 0; m < n; ++m) {
    const Scalar k = modes[static_cast<std::size_t>(m)].momentum_k;
    for (int j = 1; j <= n; ++j) {
      Scalar value = chebyshev_u_at_angle(j - 1, k);
      if (convention == Convention::alternating && (j - 1) % 2 == 1) value = -value;
      basis.u(j - 1, m) = value;
    }
    basis.u.col(m) /= basis.u.col(m).norm();
  }
  return basis;
}

template <typename Scalar = double>
struct GroupVelocity {
  Scalar velocity = Scalar(0);         // v_g = dε/dk at k̄
  Scalar crossing_momentum = Scalar(0);  // k̄ with ε(k̄) = initial energy
  Scalar initial_energy = Scalar(0);   // <ψ(0-)|H|ψ(0-)> = -mu
};

/// Group velocity at the momentum where the band crosses the Bell-pair energy -mu.
template <typename Scalar = double>
GroupVelocity<Scalar> group_velocity(const ChainParams<Scalar>& params) {
  if (params.coupling_j == Scalar(0))
    throw std::domain_error("group_velocity: flat band (J = 0) has no group velocity");
  const Scalar kbar = pi_v<Scalar> / Scalar(2);
  // dε/dk = 2 J sin k
  return {Scalar(2) * params.coupling_j * std::sin(kbar), kbar, -params.mu};
}

}  // namespace tch
