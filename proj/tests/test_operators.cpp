#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "tch/ed/operators.hpp"

using namespace tch;
using namespace tch::ed;

namespace {

double max_abs(const DenseOperator& m) { return m.cwiseAbs().maxCoeff(); }

DenseOperator dense(const SparseOperator& s) { return DenseOperator(s); }

}  // namespace

TEST(Limits, CapAndOverride) {
  EXPECT_NO_THROW(OracleLimits{}.check(10));
  EXPECT_THROW(OracleLimits{}.check(11), std::length_error);
  EXPECT_NO_THROW((OracleLimits{10, true}.check(12)));
  EXPECT_THROW((OracleLimits{10, true}.check(13)), std::length_error);
  EXPECT_THROW(build_hamiltonian({11, 1.0, 0.0}), std::length_error);
  EXPECT_THROW(jordan_wigner(11), std::length_error);
  EXPECT_EQ(oracle_memory_estimate_bytes(8), 3u * 256u * 256u * 16u);
}

TEST(Pauli, SingleSiteAlgebra) {
  const int n = 3;
  const DenseOperator id = DenseOperator::Identity(8, 8);
  for (int site = 1; site <= n; ++site) {
    const auto x = dense(pauli_x(site, n));
    const auto y = dense(pauli_y(site, n));
    const auto z = dense(pauli_z(site, n));
    EXPECT_LE(max_abs(x * x - id), 1e-15);
    EXPECT_LE(max_abs(y * y - id), 1e-15);
    EXPECT_LE(max_abs(x * y - Complex(0, 1) * z), 1e-15);
    EXPECT_LE(max_abs(dense(sigma_plus(site, n)) - 0.5 * (x + Complex(0, 1) * y)), 1e-15);
    EXPECT_LE(max_abs(dense(sigma_minus(site, n)) - 0.5 * (x - Complex(0, 1) * y)), 1e-15);
  }
  // site 2 up, others down -> index 0b010
  const StateVector up2 = basis_state(n, 2);
  EXPECT_NEAR((pauli_z(2, n) * up2 - up2).norm(), 0.0, 1e-15);
  EXPECT_NEAR((pauli_z(1, n) * up2 + up2).norm(), 0.0, 1e-15);
}

TEST(JordanWigner, AnticommutationRelations) {
  for (int n : {2, 3, 5, 8, 10}) {
    const auto fs = jordan_wigner(n);
    const SparseOperator id = identity(n);
    double worst = 0.0;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const SparseOperator fi = fs.annihilation(i);
        const SparseOperator fj_dag = fs.creation(j);
        const SparseOperator fj = fs.annihilation(j);
        SparseOperator anti = fi * fj_dag + fj_dag * fi;
        if (i == j) anti -= id;
        const SparseOperator both = fi * fj + fj * fi;
        worst = std::max({worst, anti.norm(), both.norm()});
      }
    EXPECT_LE(worst, 1e-10) << n;
    for (int i = 1; i <= n; ++i) EXPECT_NEAR((fs.annihilation(i) * vacuum(n)).norm(), 0.0, 1e-15);
  }
}

TEST(JordanWigner, PairCreationSign) {
  for (int n : {2, 3, 6}) {
    const auto fs = jordan_wigner(n);
    const StateVector state = fs.creation(1) * (fs.creation(n) * vacuum(n));
    const std::size_t index = 1 | (std::size_t{1} << (n - 1));
    EXPECT_NEAR((state - basis_state(n, index)).norm(), 0.0, 1e-15) << n;
  }
}

TEST(JordanWigner, InverseMapRebuildsSpinOperators) {
  const int n = 5;
  const auto fs = jordan_wigner(n);
  for (int site = 1; site <= n; ++site) {
    EXPECT_LE(max_abs(dense(sigma_plus_from_fermions(fs, site)) - dense(sigma_plus(site, n))), 1e-14);
    EXPECT_LE(max_abs(dense(sigma_x_from_fermions(fs, site)) - dense(pauli_x(site, n))), 1e-14);
  }
}

TEST(Hamiltonian, HermitianAndVacuumAnnihilated) {
  for (int n : {2, 4, 7}) {
    const Params p{n, 0.9, -1.3};
    const auto h = build_hamiltonian(p);
    EXPECT_LE(max_abs(h - h.adjoint()), 1e-12);
    EXPECT_NEAR((h * vacuum(n)).norm(), 0.0, 1e-14);
  }
}

TEST(Hamiltonian, FermionicFormMatchesSpinForm) {
  for (int n : {2, 3, 6, 8}) {
    const Params p{n, 1.1, 0.6};
    EXPECT_LE(max_abs(build_hamiltonian(p) - fermionic_hamiltonian(jordan_wigner(n), p)), 1e-10) << n;
  }
}

TEST(Hamiltonian, TwoSiteSpectrumIsFreeFermionFilling) {
  const Params p{2, 1.0, -1.0};
  const auto modes = build_modes(p);
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(build_hamiltonian(p), Eigen::EigenvaluesOnly);
  std::vector<double> expected{0.0, modes[0].epsilon_k, modes[1].epsilon_k, modes[0].epsilon_k + modes[1].epsilon_k};
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(es.eigenvalues()(k), expected[static_cast<std::size_t>(k)], 1e-13);
}

TEST(Hamiltonian, ManyBodySpectrumIsFreeFermionFilling) {
  const Params p{6, 0.7, 0.4};
  const auto modes = build_modes(p);
  std::vector<double> expected;
  for (unsigned mask = 0; mask < 64; ++mask) {
    double e = 0.0;
    for (int m = 0; m < 6; ++m)
      if (mask & (1u << m)) e += modes[static_cast<std::size_t>(m)].epsilon_k;
    expected.push_back(e);
  }
  std::sort(expected.begin(), expected.end());
  Eigen::SelfAdjointEigenSolver<DenseOperator> es(build_hamiltonian(p), Eigen::EigenvaluesOnly);
  for (int k = 0; k < 64; ++k) EXPECT_NEAR(es.eigenvalues()(k), expected[static_cast<std::size_t>(k)], 1e-12);
}

TEST(States, InitialBellPair) {
  for (int n : {2, 3, 6}) {
    const auto psi = initial_state(n);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-15);
    const SparseOperator zz = pauli_z(1, n) * pauli_z(n, n);
    EXPECT_NEAR(psi.dot(zz * psi).real(), 1.0, 1e-15);
    EXPECT_NEAR(psi.dot(pauli_z(1, n) * psi).real(), 0.0, 1e-15);
    const Params p{n, 1.0, -1.0};
    EXPECT_NEAR(psi.dot(build_hamiltonian(p) * psi).real(), -p.mu, 1e-14);

    const auto fs = jordan_wigner(n);
    const StateVector via_fermions = (vacuum(n) + fs.creation(1) * (fs.creation(n) * vacuum(n))) / std::sqrt(2.0);
    EXPECT_NEAR((psi - via_fermions).norm(), 0.0, 1e-15);
  }
}

TEST(States, ProjectedStatesMatchFermionicForms) {
  const int n = 4;
  const auto fs = jordan_wigner(n);
  const StateVector vac = vacuum(n);
  const StateVector pair = fs.creation(1) * (fs.creation(n) * vac);

  EXPECT_NEAR((projected_state(AliceSetting::a1, 1, n) - pair / std::sqrt(2.0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((projected_state(AliceSetting::a1, -1, n) - vac / std::sqrt(2.0)).norm(), 0.0, 1e-15);
  const StateVector expected = std::sqrt(2.0) / 4.0 * (vac + fs.creation(1) * vac + fs.creation(n) * vac + pair);
  EXPECT_NEAR((projected_state(AliceSetting::a2, 1, n) - expected).norm(), 0.0, 1e-15);

  for (auto s : {AliceSetting::a1, AliceSetting::a2})
    for (int o : {1, -1}) EXPECT_NEAR(projected_state(s, o, n).squaredNorm(), 0.5, 1e-15);
}

TEST(Observables, InvolutionsAndProjectors) {
  const int n = 3;
  const DenseOperator id = DenseOperator::Identity(8, 8);
  std::vector<SparseOperator> obs{observable(AliceSetting::a1, n), observable(AliceSetting::a2, n),
                                  observable(BobSetting::b1, n), observable(BobSetting::b2, n)};
  for (const auto& o : obs) {
    const auto d = dense(o);
    EXPECT_LE(max_abs(d - d.adjoint()), 1e-15);
    EXPECT_LE(max_abs(d * d - id), 1e-15);
    const auto plus = dense(projector(o, 1));
    const auto minus = dense(projector(o, -1));
    EXPECT_LE(max_abs(plus * plus - plus), 1e-10);
    EXPECT_LE(max_abs(plus + minus - id), 1e-15);
  }
  EXPECT_THROW(projector(obs[0], 0), std::invalid_argument);
}
