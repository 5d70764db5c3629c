#include "tch/ed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace tch::ed {

XXChainOracle::XXChainOracle(const Params& params, const OracleLimits& limits)
    : params_(params), hamiltonian_(build_hamiltonian(params, limits)), fermions_(jordan_wigner(params.n_sites, limits)) {
  Eigen::SelfAdjointEigenSolver<DenseOperator> solver(hamiltonian_);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hamiltonian diagonalization failed");
  energies_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

StateVector XXChainOracle::evolve(const StateVector& psi, double t) const {
  Eigen::VectorXcd coeffs = eigenvectors_.adjoint() * psi;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) coeffs(k) *= std::polar(1.0, -energies_(k) * t);
  return eigenvectors_ * coeffs;
}

DenseOperator XXChainOracle::evolution_operator(double t) const {
  Eigen::VectorXcd phases(energies_.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

DenseOperator XXChainOracle::heisenberg(const DenseOperator& op, double t) const {
  const DenseOperator u = evolution_operator(t);
  return u.adjoint() * op * u;
}

Complex XXChainOracle::heisenberg_matrix_element(const StateVector& bra, const SparseOperator& op,
                                                 const StateVector& ket, double t) const {
  const StateVector evolved_ket = evolve(ket, t);
  const StateVector evolved_bra = evolve(bra, t);
  return evolved_bra.dot(op * evolved_ket);
}

Complex XXChainOracle::propagator_entry(int i, int j, double t) const {
  const StateVector vac = vacuum(n_sites());
  const StateVector bra = fermions_.creation(i) * vac;
  return heisenberg_matrix_element(bra, fermions_.creation(j), vac, t);
}

double conditional_probability(const XXChainOracle& oracle, AliceSetting setting_a, int outcome_a,
                               BobSetting setting_b, int outcome_b, double t) {
  const int n = oracle.n_sites();
  const StateVector after_alice = oracle.evolve(projected_state(setting_a, outcome_a, n), t);
  const StateVector after_bob = projector(observable(setting_b, n), outcome_b) * after_alice;
  return after_bob.squaredNorm();
}

double i_ch_oracle(const XXChainOracle& oracle, double t) {
  using A = AliceSetting;
  using B = BobSetting;
  return conditional_probability(oracle, A::a1, 1, B::b2, 1, t) + conditional_probability(oracle, A::a1, -1, B::b1, -1, t) +
         conditional_probability(oracle, A::a2, 1, B::b1, 1, t) - conditional_probability(oracle, A::a2, 1, B::b2, 1, t);
}

ChPrimeTerms i_ch_prime_oracle(const XXChainOracle& oracle, double t) {
  using A = AliceSetting;
  using B = BobSetting;
  const auto p = [&](A a, int oa, B b, int ob) { return conditional_probability(oracle, a, oa, b, ob, t); };

  ChPrimeTerms terms;
  terms.p_alice_a1 = p(A::a1, 1, B::b1, 1) + p(A::a1, 1, B::b1, -1);
  terms.p_alice_a1_via_b2 = p(A::a1, 1, B::b2, 1) + p(A::a1, 1, B::b2, -1);
  terms.p_bob_b1 = p(A::a1, 1, B::b1, 1) + p(A::a1, -1, B::b1, 1);
  terms.value = p(A::a1, 1, B::b1, 1) + p(A::a1, 1, B::b2, 1) + p(A::a2, 1, B::b1, 1) - p(A::a2, 1, B::b2, 1) -
                terms.p_alice_a1 - terms.p_bob_b1;
  return terms;
}

VacuumContractions vacuum_contractions(const XXChainOracle& oracle, double t) {
  const int n = oracle.n_sites();
  const FermionSet& fs = oracle.fermions();
  const StateVector vac = vacuum(n);
  const StateVector one = fs.creation(1) * vac;
  const StateVector last = fs.creation(n) * vac;
  const StateVector pair = fs.creation(1) * last;  // f_1^† f_N^† |0>, the ket dual to <0| f_N f_1
  const SparseOperator sigma_x = sigma_x_from_fermions(fs, n);

  VacuumContractions c;
  c.number_n = oracle.heisenberg_matrix_element(pair, fs.number(n), pair, t);
  c.sigma_x_pair = oracle.heisenberg_matrix_element(pair, sigma_x, pair, t);
  c.sigma_x_from_n = oracle.heisenberg_matrix_element(vac, sigma_x, last, t);
  c.sigma_x_from_1 = oracle.heisenberg_matrix_element(vac, sigma_x, one, t);
  c.pair_sigma_x_1 = oracle.heisenberg_matrix_element(pair, sigma_x, one, t);
  c.pair_sigma_x_n = oracle.heisenberg_matrix_element(pair, sigma_x, last, t);
  return c;
}

ConjectureCheck edge_pair_conjecture_check(const XXChainOracle& oracle, std::span<const double> t_grid,
                                           Convention convention) {
  if (t_grid.empty()) throw std::invalid_argument("conjecture check needs a nonempty time grid");
  const int n = oracle.n_sites();
  const Propagator<double> prop(oracle.params(), convention);
  ConjectureCheck check{n, 0.0, t_grid.front()};
  for (double t : t_grid) {
    const auto c = vacuum_contractions(oracle, t);
    const double lhs = (c.pair_sigma_x_1 + c.pair_sigma_x_n).real();
    const auto ph = prop.phases(t);
    const double rhs = (prop.entry_with_phases(n, n, ph) - prop.entry_with_phases(1, n, ph)).real();
    const double deviation = std::abs(lhs - rhs);
    if (deviation > check.max_deviation) {
      check.max_deviation = deviation;
      check.worst_time = t;
    }
  }
  return check;
}

double propagator_deviation(const XXChainOracle& oracle, Convention convention, std::span<const double> times) {
  const int n = oracle.n_sites();
  const Propagator<double> prop(oracle.params(), convention);
  double worst = 0.0;
  for (double t : times) {
    const auto g = prop.matrix(t).entries;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) worst = std::max(worst, std::abs(oracle.propagator_entry(i, j, t) - g(i - 1, j - 1)));
  }
  return worst;
}

ConventionResolution resolve_convention(const Params& probe, double tolerance) {
  const XXChainOracle oracle(probe);
  const double times[] = {0.3, 0.7, 1.9};
  ConventionResolution r;
  r.probe = probe;
  r.deviation_plain = propagator_deviation(oracle, Convention::plain, times);
  r.deviation_alternating = propagator_deviation(oracle, Convention::alternating, times);
  const bool plain_ok = r.deviation_plain <= tolerance;
  const bool alternating_ok = r.deviation_alternating <= tolerance;
  if (plain_ok == alternating_ok)
    throw std::runtime_error(std::string("convention probe is inconclusive: ") +
                             (plain_ok ? "both conventions" : "neither convention") + " reproduce the oracle propagator");
  r.selected = plain_ok ? Convention::plain : Convention::alternating;
  return r;
}

}  // namespace tch::ed
