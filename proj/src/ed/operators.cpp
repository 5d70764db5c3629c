#include "tch/ed/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tch::ed {

namespace {

using Local = std::array<std::array<Complex, 2>, 2>;  // local[out][in], 0 = down, 1 = up

constexpr Complex kI{0.0, 1.0};

void check_site(int site, int n_sites) {
  if (site < 1 || site > n_sites)
    throw std::out_of_range("site " + std::to_string(site) + " outside 1.." + std::to_string(n_sites));
}

SparseOperator site_operator(const Local& local, int site, int n_sites) {
  check_site(site, n_sites);
  const std::size_t dim = hilbert_dimension(n_sites);
  const std::size_t mask = std::size_t{1} << (site - 1);
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(2 * dim);
  for (std::size_t in = 0; in < dim; ++in) {
    const int bit_in = (in & mask) ? 1 : 0;
    for (int bit_out = 0; bit_out < 2; ++bit_out) {
      const Complex value = local[bit_out][bit_in];
      if (value == Complex(0.0)) continue;
      const std::size_t out = bit_out ? (in | mask) : (in & ~mask);
      triplets.emplace_back(static_cast<int>(out), static_cast<int>(in), value);
    }
  }
  SparseOperator op(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  op.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace

void OracleLimits::check(int n_sites) const {
  if (n_sites < 2) throw std::invalid_argument("oracle needs at least 2 sites");
  const int cap = allow_override ? kHardMaxSites : std::min(max_sites, kHardMaxSites);
  if (n_sites > cap)
    throw std::length_error("oracle size " + std::to_string(n_sites) + " exceeds the cap of " + std::to_string(cap) +
                            " sites");
}

std::size_t hilbert_dimension(int n_sites) {
  if (n_sites < 1 || n_sites > 30) throw std::invalid_argument("unsupported number of sites");
  return std::size_t{1} << n_sites;
}

std::size_t oracle_memory_estimate_bytes(int n_sites) {
  const std::size_t dim = hilbert_dimension(n_sites);
  // Hamiltonian, eigenvectors, one evolution-sized scratch matrix.
  return 3 * dim * dim * sizeof(Complex);
}

SparseOperator identity(int n_sites) {
  const auto dim = static_cast<Eigen::Index>(hilbert_dimension(n_sites));
  SparseOperator op(dim, dim);
  op.setIdentity();
  return op;
}

SparseOperator pauli_x(int site, int n_sites) { return site_operator({{{0.0, 1.0}, {1.0, 0.0}}}, site, n_sites); }

SparseOperator pauli_y(int site, int n_sites) {
  // <down|σy|up> = i, <up|σy|down> = -i
  return site_operator({{{0.0, kI}, {-kI, 0.0}}}, site, n_sites);
}

SparseOperator pauli_z(int site, int n_sites) { return site_operator({{{-1.0, 0.0}, {0.0, 1.0}}}, site, n_sites); }

SparseOperator sigma_plus(int site, int n_sites) { return site_operator({{{0.0, 0.0}, {1.0, 0.0}}}, site, n_sites); }

SparseOperator sigma_minus(int site, int n_sites) { return site_operator({{{0.0, 1.0}, {0.0, 0.0}}}, site, n_sites); }

SparseOperator FermionSet::string(int site) const {
  check_site(site, n_sites);
  SparseOperator out = identity(n_sites);
  const SparseOperator one = identity(n_sites);
  for (int j = 1; j < site; ++j) out = SparseOperator(out * SparseOperator(one - 2.0 * number(j)));
  return out;
}

FermionSet jordan_wigner(int n_sites, const OracleLimits& limits) {
  limits.check(n_sites);
  FermionSet fermions{n_sites, {}};
  fermions.f.reserve(static_cast<std::size_t>(n_sites));
  for (int i = 1; i <= n_sites; ++i) {
    // 1 - 2 n_j = -σ_j^z on the spin side
    SparseOperator op = sigma_minus(i, n_sites);
    for (int j = 1; j < i; ++j) op = SparseOperator(-pauli_z(j, n_sites) * op);
    op.makeCompressed();
    fermions.f.push_back(std::move(op));
  }
  return fermions;
}

SparseOperator sigma_plus_from_fermions(const FermionSet& fermions, int site) {
  return SparseOperator(fermions.string(site) * fermions.creation(site));
}

SparseOperator sigma_x_from_fermions(const FermionSet& fermions, int site) {
  return SparseOperator(fermions.string(site) * SparseOperator(fermions.creation(site) + fermions.annihilation(site)));
}

DenseOperator build_hamiltonian(const Params& params, const OracleLimits& limits) {
  params.validate();
  limits.check(params.n_sites);
  const int n = params.n_sites;
  SparseOperator h(identity(n).rows(), identity(n).cols());
  for (int i = 1; i < n; ++i) {
    const SparseOperator xx = pauli_x(i, n) * pauli_x(i + 1, n);
    const SparseOperator yy = pauli_y(i, n) * pauli_y(i + 1, n);
    h += Complex(-params.coupling_j / 2.0) * SparseOperator(xx + yy);
  }
  const SparseOperator one = identity(n);
  for (int i = 1; i <= n; ++i) h += Complex(-params.mu / 2.0) * SparseOperator(pauli_z(i, n) + one);
  return DenseOperator(h);
}

DenseOperator fermionic_hamiltonian(const FermionSet& fermions, const Params& params) {
  const int n = fermions.n_sites;
  SparseOperator h(identity(n).rows(), identity(n).cols());
  for (int i = 1; i < n; ++i) {
    const SparseOperator hop = fermions.creation(i) * fermions.annihilation(i + 1);
    h += Complex(-params.coupling_j) * SparseOperator(hop + SparseOperator(hop.adjoint()));
  }
  for (int i = 1; i <= n; ++i) h += Complex(-params.mu) * fermions.number(i);
  return DenseOperator(h);
}

StateVector basis_state(int n_sites, std::size_t index) {
  const std::size_t dim = hilbert_dimension(n_sites);
  if (index >= dim) throw std::out_of_range("basis index out of range");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(dim));
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return psi;
}

StateVector vacuum(int n_sites) { return basis_state(n_sites, 0); }

StateVector initial_state(int n_sites) {
  if (n_sites < 2) throw std::invalid_argument("initial_state needs at least 2 sites");
  StateVector psi = vacuum(n_sites);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(static_cast<Eigen::Index>(1 | (std::size_t{1} << (n_sites - 1)))) = 1.0 / std::sqrt(2.0);
  return psi;
}

SparseOperator observable(AliceSetting setting, int n_sites) {
  return setting == AliceSetting::a1 ? pauli_z(1, n_sites) : pauli_x(1, n_sites);
}

SparseOperator observable(BobSetting setting, int n_sites) {
  const double sign = setting == BobSetting::b1 ? 1.0 : -1.0;
  return SparseOperator(Complex(1.0 / std::sqrt(2.0)) *
                        SparseOperator(pauli_z(n_sites, n_sites) + Complex(sign) * pauli_x(n_sites, n_sites)));
}

SparseOperator projector(const SparseOperator& obs, int outcome) {
  if (outcome != 1 && outcome != -1) throw std::invalid_argument("measurement outcomes are +1 or -1");
  SparseOperator one(obs.rows(), obs.cols());
  one.setIdentity();
  return SparseOperator(Complex(0.5) * SparseOperator(one + Complex(outcome) * obs));
}

StateVector projected_state(AliceSetting setting, int outcome, int n_sites) {
  return projector(observable(setting, n_sites), outcome) * initial_state(n_sites);
}

}  // namespace tch::ed
