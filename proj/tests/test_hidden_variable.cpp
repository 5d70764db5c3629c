#include <gtest/gtest.h>

#include <random>

#include "tch/ed/hidden_variable.hpp"

using namespace tch::ed;

TEST(HiddenVariable, PlusStateWorkedExample) {
  const auto inst = plus_state_example();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto r = hv_repeated_check(inst, a, b);
      EXPECT_NEAR(r.direct, 0.25, 1e-15);
      EXPECT_NEAR(r.hidden_variable, 0.25, 1e-15);
    }
}

TEST(HiddenVariable, RepeatedIdentityOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_repeated_instance(seed);
    double total = 0.0;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        const auto r = hv_repeated_check(inst, a, b);
        EXPECT_NEAR(r.direct, r.hidden_variable, 1e-12);
        total += r.direct;
      }
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(HiddenVariable, CausalIdentityOnRandomInstances) {
  for (std::uint64_t seed = 1000; seed < 1100; ++seed) {
    const auto inst = random_causal_instance(seed);
    for (int a = 0; a < 2; ++a) {
      double marginal = 0.0;
      for (int b = 0; b < 2; ++b) {
        const auto r = hv_causal_check(inst, a, b);
        EXPECT_NEAR(r.direct, r.hidden_variable, 1e-12);
        marginal += r.direct;
      }
      // Σ_b P_ab = Tr[(|a><a| ⊗ 1) ρ]
      DenseOperator pa = DenseOperator::Zero(4, 4);
      const Eigen::VectorXcd ka = inst.first_basis.col(a);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) pa.block(2 * x, 2 * y, 2, 2) = ka(x) * std::conj(ka(y)) * DenseOperator::Identity(2, 2);
      EXPECT_NEAR(marginal, (pa * inst.rho).trace().real(), 1e-12);
    }
  }
}

TEST(HiddenVariable, ProductStateWithoutEvolutionFactorizes) {
  std::mt19937_64 rng(9);
  const DenseOperator rho_a = random_density_matrix(2, rng);
  const DenseOperator rho_b = random_density_matrix(2, rng);
  HvInstance inst;
  inst.dimension = 4;
  inst.dim_a = 2;
  inst.dim_b = 2;
  inst.rho.resize(4, 4);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) inst.rho.block(2 * x, 2 * y, 2, 2) = rho_a(x, y) * rho_b;
  inst.first_basis = random_unitary(2, rng);
  inst.second_basis = random_unitary(2, rng);
  inst.evolution = DenseOperator::Identity(4, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Eigen::VectorXcd ka = inst.first_basis.col(a);
      const Eigen::VectorXcd kb = inst.second_basis.col(b);
      const double expected = ka.dot(rho_a * ka).real() * kb.dot(rho_b * kb).real();
      EXPECT_NEAR(hv_causal_check(inst, a, b).direct, expected, 1e-14);
    }
}

TEST(HiddenVariable, SeededInstancesAreReproducible) {
  const auto a = random_repeated_instance(42);
  const auto b = random_repeated_instance(42);
  EXPECT_EQ(a.rho, b.rho);
  EXPECT_EQ(a.evolution, b.evolution);
  EXPECT_NE(random_repeated_instance(43).rho, a.rho);
}

TEST(HiddenVariable, RejectsInvalidInstances) {
  auto inst = random_causal_instance(5);
  auto bad_rho = inst;
  bad_rho.rho *= 2.0;
  EXPECT_THROW(hv_causal_check(bad_rho, 0, 0), std::invalid_argument);
  auto bad_u = inst;
  bad_u.evolution(0, 0) += 0.5;
  EXPECT_THROW(hv_causal_check(bad_u, 0, 0), std::invalid_argument);
  auto bad_split = inst;
  bad_split.dim_a = 4;
  bad_split.dim_b = 1;
  EXPECT_THROW(hv_causal_check(bad_split, 0, 0), std::invalid_argument);
  EXPECT_THROW(hv_causal_check(inst, 2, 0), std::out_of_range);
}
