#pragma once

#include <span>

#include "tch/ed/operators.hpp"

namespace tch::ed {

/// Brute-force XX chain: one dense Hermitian eigendecomposition of H,
/// reused for every evolution time. Immutable after construction.
class XXChainOracle {
 public:
  explicit XXChainOracle(const Params& params, const OracleLimits& limits = {});

  const Params& params() const { return params_; }
  int n_sites() const { return params_.n_sites; }
  const DenseOperator& hamiltonian() const { return hamiltonian_; }
  const Eigen::VectorXd& energies() const { return energies_; }
  const FermionSet& fermions() const { return fermions_; }

  /// e^{-iHt} ψ
  StateVector evolve(const StateVector& psi, double t) const;
  /// e^{-iHt}
  DenseOperator evolution_operator(double t) const;
  /// O(t) = e^{iHt} O e^{-iHt}
  DenseOperator heisenberg(const DenseOperator& op, double t) const;
  /// <bra| O(t) |ket>, evaluated as (U bra)^† O (U ket)
  Complex heisenberg_matrix_element(const StateVector& bra, const SparseOperator& op, const StateVector& ket,
                                    double t) const;

  /// <0| f_i f_j^†(t) |0>, the many-body counterpart of G_ij(t).
  Complex propagator_entry(int i, int j, double t) const;

 private:
  Params params_;
  DenseOperator hamiltonian_;
  Eigen::VectorXd energies_;
  DenseOperator eigenvectors_;
  FermionSet fermions_;
};

/// || Π_b e^{-iHt} Π_a ψ(0-) ||², the probability of the outcome pair given the settings.
double conditional_probability(const XXChainOracle& oracle, AliceSetting setting_a, int outcome_a,
                               BobSetting setting_b, int outcome_b, double t);

/// p11(A1,B2) + p-1-1(A1,B1) + p11(A2,B1) - p11(A2,B2)
double i_ch_oracle(const XXChainOracle& oracle, double t);

struct ChPrimeTerms {
  double value = 0.0;
  double p_alice_a1 = 0.0;          // P_A(1|A1) from the B1 marginal
  double p_alice_a1_via_b2 = 0.0;   // same marginal from B2
  double p_bob_b1 = 0.0;            // P_B(1|B1) from the A1 marginal
};

/// Time-free CH combination with Bob's observables evolved; I = I' + 1.
ChPrimeTerms i_ch_prime_oracle(const XXChainOracle& oracle, double t);

struct VacuumContractions {
  Complex number_n = 0.0;         // <0|f_N f_1 f_N^†(t) f_N(t) f_1^† f_N^†|0>
  Complex sigma_x_pair = 0.0;     // <0|f_N f_1 σx_N(t) f_1^† f_N^†|0>
  Complex sigma_x_from_n = 0.0;   // <0|σx_N(t) f_N^†|0>
  Complex sigma_x_from_1 = 0.0;   // <0|σx_N(t) f_1^†|0>
  Complex pair_sigma_x_1 = 0.0;   // <0|f_N f_1 σx_N(t) f_1^†|0>
  Complex pair_sigma_x_n = 0.0;   // <0|f_N f_1 σx_N(t) f_N^†|0>
};

VacuumContractions vacuum_contractions(const XXChainOracle& oracle, double t);

struct ConjectureCheck {
  int n_sites = 0;
  double max_deviation = 0.0;
  double worst_time = 0.0;
};

/// max_t | Re[<0|f_N f_1 σx_N(t) (f_1^† + f_N^†)|0>] - Re[G_NN(t) - G_1N(t)] |
ConjectureCheck edge_pair_conjecture_check(const XXChainOracle& oracle, std::span<const double> t_grid,
                                           Convention convention);

struct ConventionResolution {
  Convention selected = Convention::plain;
  double deviation_plain = 0.0;
  double deviation_alternating = 0.0;
  Params probe;
};

/// Compare <0|f_i f_j^†(t)|0> from the oracle against G_ij(t) under both
/// sign conventions on a small probe chain and return the one that matches.
/// Throws std::runtime_error unless exactly one convention matches within tolerance.
ConventionResolution resolve_convention(const Params& probe = {4, 1.0, -1.0}, double tolerance = 1e-9);

/// Largest |<0|f_i f_j^†(t)|0> - G_ij(t)| over all site pairs and the given times.
double propagator_deviation(const XXChainOracle& oracle, Convention convention, std::span<const double> times);

}  // namespace tch::ed
