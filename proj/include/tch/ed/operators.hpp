#pragma once

// Many-body operators on the 2^N product basis.
//
// Basis convention used everywhere: site i (1-based) is bit i-1 of the basis
// index, so site 1 is the least significant bit. Bit value 1 is spin up,
// which the Jordan-Wigner map identifies with an occupied fermion mode.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "tch/inequality.hpp"

namespace tch::ed {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;
using DenseOperator = Eigen::MatrixXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;

/// Size guard for dense 2^N work.
struct OracleLimits {
  static constexpr int kDefaultMaxSites = 10;
  static constexpr int kHardMaxSites = 12;

  int max_sites = kDefaultMaxSites;
  bool allow_override = false;  // lifts max_sites up to kHardMaxSites

  void check(int n_sites) const;
};

/// Rough peak footprint of one oracle instance (Hamiltonian, eigenvectors, scratch).
std::size_t oracle_memory_estimate_bytes(int n_sites);

std::size_t hilbert_dimension(int n_sites);

SparseOperator identity(int n_sites);
SparseOperator pauli_x(int site, int n_sites);
SparseOperator pauli_y(int site, int n_sites);
SparseOperator pauli_z(int site, int n_sites);
SparseOperator sigma_plus(int site, int n_sites);
SparseOperator sigma_minus(int site, int n_sites);

/// Jordan-Wigner annihilation operators f_i = prod_{j<i} (1 - 2 n_j) σ_i^-.
struct FermionSet {
  int n_sites = 0;
  std::vector<SparseOperator> f;

  const SparseOperator& annihilation(int site) const { return f.at(static_cast<std::size_t>(site - 1)); }
  SparseOperator creation(int site) const { return SparseOperator(annihilation(site).adjoint()); }
  SparseOperator number(int site) const { return creation(site) * annihilation(site); }
  /// prod_{j<site} (1 - 2 n_j)
  SparseOperator string(int site) const;
};

FermionSet jordan_wigner(int n_sites, const OracleLimits& limits = {});

/// σ_i^+ = prod_{j<i}(1 - 2 f_j^† f_j) f_i^†
SparseOperator sigma_plus_from_fermions(const FermionSet& fermions, int site);
/// σ_i^x = prod_{j<i}(1 - 2 f_j^† f_j)(f_i^† + f_i)
SparseOperator sigma_x_from_fermions(const FermionSet& fermions, int site);

/// H = -(J/2) Σ (σx σx + σy σy) - (μ/2) Σ (σz + 1), open boundaries.
DenseOperator build_hamiltonian(const Params& params, const OracleLimits& limits = {});

/// -J Σ (f_i^† f_{i+1} + h.c.) - μ Σ f_i^† f_i
DenseOperator fermionic_hamiltonian(const FermionSet& fermions, const Params& params);

StateVector basis_state(int n_sites, std::size_t index);
StateVector vacuum(int n_sites);

/// Bell pair (|↑↑> + |↓↓>)/√2 on sites 1 and N, every other site down.
StateVector initial_state(int n_sites);

SparseOperator observable(AliceSetting setting, int n_sites);
SparseOperator observable(BobSetting setting, int n_sites);

/// (1 + outcome * O) / 2
SparseOperator projector(const SparseOperator& observable, int outcome);

/// Alice's post-measurement state, not renormalized; its squared norm is the outcome probability.
StateVector projected_state(AliceSetting setting, int outcome, int n_sites);

}  // namespace tch::ed
