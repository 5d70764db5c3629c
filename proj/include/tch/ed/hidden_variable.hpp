#pragma once

#include <cstdint>

#include "tch/ed/operators.hpp"

namespace tch::ed {

/// A small system for checking the deterministic hidden-variable rewrites
/// of sequential projective measurements.
///
/// For repeated measurements by one party, both bases span the full space.
/// For two causally connected parties the space factorizes as A ⊗ B (A is the
/// more significant factor, index = a * dim_b + b); `first_basis` then acts on
/// A and `second_basis` on B. Basis columns are the measurement eigenvectors
/// and outcomes are column indices.
struct HvInstance {
  int dimension = 0;
  int dim_a = 0;
  int dim_b = 0;
  DenseOperator rho;           // state at T = 0
  DenseOperator first_basis;   // measured at T = 0
  DenseOperator second_basis;  // measured at T = t
  DenseOperator evolution;     // U(t)
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument unless rho is a density matrix and U and the bases are unitary.
  void validate() const;
};

struct HvCheck {
  double direct = 0.0;          // sequential-projection probability
  double hidden_variable = 0.0;  // deterministic-response mixture
};

/// Same party, two times: Tr[Π2 U Π1 ρ Π1 U† Π2] versus Σ_λ π(λ) D_{a1'} D_{a1' a2'}.
HvCheck hv_repeated_check(const HvInstance& instance, int outcome_first, int outcome_second);

/// Alice then Bob: Tr[(1 ⊗ |b><b|) ρ(A,a,t)] versus Σ_{a',b'} π(a',b') δ_{aa'} δ_{bb'},
/// with π(a',b') = <B,b'| Tr_A ρ(A,a',t) |B,b'>.
HvCheck hv_causal_check(const HvInstance& instance, int outcome_a, int outcome_b);

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
template <typename Rng>
DenseOperator random_unitary(int dim, Rng& rng);

/// Random mixed state G G† / Tr(G G†).
template <typename Rng>
DenseOperator random_density_matrix(int dim, Rng& rng);

/// Two-qubit instance for the repeated-measurement identity.
HvInstance random_repeated_instance(std::uint64_t seed);
/// Two-qubit instance (one qubit per party) for the causal identity.
HvInstance random_causal_instance(std::uint64_t seed);

/// ρ = |+><+|, first basis σz, second basis σx, U = 1. Every outcome pair has probability 1/4.
HvInstance plus_state_example();

/// Partial trace over the A factor of a (dim_a * dim_b)-dimensional operator.
DenseOperator trace_out_a(const DenseOperator& op, int dim_a, int dim_b);

}  // namespace tch::ed
