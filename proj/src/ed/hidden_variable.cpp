#include "tch/ed/hidden_variable.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace tch::ed {

namespace {

constexpr double kTolerance = 1e-10;

bool is_unitary(const DenseOperator& u) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - DenseOperator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= kTolerance;
}

DenseOperator rank_one(const DenseOperator& basis, int column) {
  return basis.col(column) * basis.col(column).adjoint();
}

void check_outcome(const DenseOperator& basis, int outcome) {
  if (outcome < 0 || outcome >= basis.cols()) throw std::out_of_range("outcome index outside the measurement basis");
}

template <typename Rng>
DenseOperator gaussian_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseOperator g(dim, dim);
  // Column-major fill order keeps the stream layout fixed.
  for (int c = 0; c < dim; ++c)
    for (int r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

}  // namespace

void HvInstance::validate() const {
  if (dimension <= 0 || rho.rows() != dimension || rho.cols() != dimension)
    throw std::invalid_argument("density matrix does not match the instance dimension");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTolerance) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > kTolerance) throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTolerance) throw std::invalid_argument("density matrix is not positive semidefinite");
  if (evolution.rows() != dimension || !is_unitary(evolution)) throw std::invalid_argument("evolution operator is not unitary");
  if (!is_unitary(first_basis) || !is_unitary(second_basis)) throw std::invalid_argument("measurement basis is not orthonormal");
}

HvCheck hv_repeated_check(const HvInstance& instance, int outcome_first, int outcome_second) {
  instance.validate();
  if (instance.first_basis.rows() != instance.dimension || instance.second_basis.rows() != instance.dimension)
    throw std::invalid_argument("repeated measurements need full-space bases");
  check_outcome(instance.first_basis, outcome_first);
  check_outcome(instance.second_basis, outcome_second);
  const auto& u = instance.evolution;

  const DenseOperator p1 = rank_one(instance.first_basis, outcome_first);
  const DenseOperator p2 = rank_one(instance.second_basis, outcome_second);
  const DenseOperator sequence = p2 * u * p1 * instance.rho * p1 * u.adjoint() * p2;

  HvCheck check;
  check.direct = sequence.trace().real();
  const int dim = instance.dimension;
  for (int a1 = 0; a1 < dim; ++a1) {
    for (int a2 = 0; a2 < dim; ++a2) {
      const double pi_lambda = (a1 == outcome_first && a2 == outcome_second) ? 1.0 : 0.0;
      if (pi_lambda == 0.0) continue;
      const auto& k1 = instance.first_basis.col(a1);
      const auto& k2 = instance.second_basis.col(a2);
      const double d_initial = k1.dot(instance.rho * k1).real();
      const double d_transition = std::norm(k2.dot(u * k1));
      check.hidden_variable += pi_lambda * d_initial * d_transition;
    }
  }
  return check;
}

DenseOperator trace_out_a(const DenseOperator& op, int dim_a, int dim_b) {
  if (op.rows() != dim_a * dim_b || op.cols() != dim_a * dim_b) throw std::invalid_argument("partition mismatch");
  DenseOperator reduced = DenseOperator::Zero(dim_b, dim_b);
  for (int a = 0; a < dim_a; ++a) reduced += op.block(a * dim_b, a * dim_b, dim_b, dim_b);
  return reduced;
}

HvCheck hv_causal_check(const HvInstance& instance, int outcome_a, int outcome_b) {
  instance.validate();
  if (instance.dim_a <= 0 || instance.dim_b <= 0 || instance.dim_a * instance.dim_b != instance.dimension ||
      instance.first_basis.rows() != instance.dim_a || instance.second_basis.rows() != instance.dim_b)
    throw std::invalid_argument("partition mismatch between the instance dimension and the party bases");
  check_outcome(instance.first_basis, outcome_a);
  check_outcome(instance.second_basis, outcome_b);
  const int da = instance.dim_a;
  const int db = instance.dim_b;
  const auto& u = instance.evolution;
  const DenseOperator id_b = DenseOperator::Identity(db, db);
  const DenseOperator id_a = DenseOperator::Identity(da, da);

  const auto kron = [](const DenseOperator& x, const DenseOperator& y) {
    DenseOperator out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index r = 0; r < x.rows(); ++r)
      for (Eigen::Index c = 0; c < x.cols(); ++c) out.block(r * y.rows(), c * y.cols(), y.rows(), y.cols()) = x(r, c) * y;
    return out;
  };
  // ρ(A, a, t): Alice's unnormalized post-measurement state, evolved.
  const auto evolved_after_alice = [&](int a) {
    const DenseOperator pa = kron(rank_one(instance.first_basis, a), id_b);
    return DenseOperator(u * pa * instance.rho * pa * u.adjoint());
  };

  HvCheck check;
  const DenseOperator bob_projector = kron(id_a, rank_one(instance.second_basis, outcome_b));
  check.direct = (bob_projector * evolved_after_alice(outcome_a)).trace().real();

  for (int a_prime = 0; a_prime < da; ++a_prime) {
    const DenseOperator reduced = trace_out_a(evolved_after_alice(a_prime), da, db);
    for (int b_prime = 0; b_prime < db; ++b_prime) {
      const auto& kb = instance.second_basis.col(b_prime);
      const double pi_lambda = kb.dot(reduced * kb).real();
      const double response = (a_prime == outcome_a && b_prime == outcome_b) ? 1.0 : 0.0;
      check.hidden_variable += pi_lambda * response;
    }
  }
  return check;
}

template <typename Rng>
DenseOperator random_unitary(int dim, Rng& rng) {
  const DenseOperator g = gaussian_matrix(dim, rng);
  Eigen::HouseholderQR<DenseOperator> qr(g);
  DenseOperator q = qr.householderQ() * DenseOperator::Identity(dim, dim);
  const DenseOperator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

template <typename Rng>
DenseOperator random_density_matrix(int dim, Rng& rng) {
  const DenseOperator g = gaussian_matrix(dim, rng);
  DenseOperator rho = g * g.adjoint();
  rho /= rho.trace();
  return DenseOperator(0.5 * (rho + rho.adjoint()));
}

template DenseOperator random_unitary<std::mt19937_64>(int, std::mt19937_64&);
template DenseOperator random_density_matrix<std::mt19937_64>(int, std::mt19937_64&);

HvInstance random_repeated_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HvInstance inst;
  inst.dimension = 4;
  inst.dim_a = 4;
  inst.dim_b = 1;
  inst.rho = random_density_matrix(4, rng);
  inst.first_basis = random_unitary(4, rng);
  inst.second_basis = random_unitary(4, rng);
  inst.evolution = random_unitary(4, rng);
  inst.rng_seed = seed;
  return inst;
}

HvInstance random_causal_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  HvInstance inst;
  inst.dimension = 4;
  inst.dim_a = 2;
  inst.dim_b = 2;
  inst.rho = random_density_matrix(4, rng);
  inst.first_basis = random_unitary(2, rng);
  inst.second_basis = random_unitary(2, rng);
  inst.evolution = random_unitary(4, rng);
  inst.rng_seed = seed;
  return inst;
}

HvInstance plus_state_example() {
  const double s = 1.0 / std::sqrt(2.0);
  HvInstance inst;
  inst.dimension = 2;
  inst.dim_a = 2;
  inst.dim_b = 1;
  Eigen::Vector2cd plus(s, s);
  inst.rho = plus * plus.adjoint();
  inst.first_basis = DenseOperator::Identity(2, 2);  // σz eigenvectors |0>, |1>
  inst.second_basis.resize(2, 2);
  inst.second_basis << s, s, s, -s;  // σx eigenvectors |+>, |->
  inst.evolution = DenseOperator::Identity(2, 2);
  return inst;
}

}  // namespace tch::ed
