#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "tch/spectral.hpp"

namespace tch {

/// Precomputed eigenvectors and energies for one (N, J, mu, convention).
template <typename Scalar = double>
struct ModeTable {
  SingleParticleBasis<Scalar> basis;
  VectorX<Scalar> energies;
};

namespace detail {

template <typename Scalar>
class ModeTableCache {
 public:
  static ModeTableCache& instance() {
    static ModeTableCache cache;
    return cache;
  }

  std::shared_ptr<const ModeTable<Scalar>> get(const ChainParams<Scalar>& params, Convention convention) {
    const Key key{params.n_sites, params.coupling_j, params.mu, convention};
    {
      std::shared_lock lock(mutex_);
      if (auto it = tables_.find(key); it != tables_.end()) return it->second;
    }
    auto table = std::make_shared<ModeTable<Scalar>>();
    table->basis = eigenbasis(params, convention);
    const auto modes = build_modes(params);
    table->energies.resize(params.n_sites);
    for (int m = 0; m < params.n_sites; ++m) table->energies(m) = modes[static_cast<std::size_t>(m)].epsilon_k;

    std::unique_lock lock(mutex_);
    if (tables_.size() > kMaxEntries) tables_.clear();
    return tables_.emplace(key, std::move(table)).first->second;
  }

 private:
  using Key = std::tuple<int, Scalar, Scalar, Convention>;
  static constexpr std::size_t kMaxEntries = 256;

  std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const ModeTable<Scalar>>> tables_;
};

}  // namespace detail

template <typename Scalar = double>
std::shared_ptr<const ModeTable<Scalar>> mode_table(const ChainParams<Scalar>& params, Convention convention) {
  params.validate();
  return detail::ModeTableCache<Scalar>::instance().get(params, convention);
}

template <typename Scalar = double>
struct PropagatorMatrix {
  Scalar time_t = Scalar(0);
  ChainParams<Scalar> params;
  Convention convention = Convention::plain;
  ComplexMatrixX<Scalar> entries;  // entries(i-1, j-1) = G_ij(t)
};

/// Single-particle propagator G_ij(t) = sum_k u_ik u_jk exp(i ε_k t).
///
/// Columns give the Heisenberg evolution of creation operators,
/// f_j^†(t) = sum_i G_ij(t) f_i^†. Sites are 1-based in the public API.
template <typename Scalar = double>
class Propagator {
 public:
  using Complex = std::complex<Scalar>;

  Propagator(const ChainParams<Scalar>& params, Convention convention)
      : params_(params), convention_(convention), table_(mode_table(params, convention)) {}

  const ChainParams<Scalar>& params() const { return params_; }
  Convention convention() const { return convention_; }
  int n_sites() const { return params_.n_sites; }
  const ModeTable<Scalar>& table() const { return *table_; }

  ComplexVectorX<Scalar> phases(Scalar t) const {
    ComplexVectorX<Scalar> out(n_sites());
    for (int m = 0; m < n_sites(); ++m) out(m) = std::polar(Scalar(1), table_->energies(m) * t);
    return out;
  }

  Complex entry(int i, int j, Scalar t) const {
    check_site(i);
    check_site(j);
    return entry_with_phases(i, j, phases(t));
  }

  Complex entry_with_phases(int i, int j, const ComplexVectorX<Scalar>& ph) const {
    const auto& u = table_->basis.u;
    Complex sum(0);
    for (int m = 0; m < n_sites(); ++m) sum += u(i - 1, m) * u(j - 1, m) * ph(m);
    return sum;
  }

  PropagatorMatrix<Scalar> matrix(Scalar t) const {
    const auto& u = table_->basis.u;
    const ComplexVectorX<Scalar> ph = phases(t);
    const ComplexMatrixX<Scalar> weighted = u.template cast<Complex>() * ph.asDiagonal();
    ComplexMatrixX<Scalar> g = weighted * u.transpose().template cast<Complex>();
    return {t, params_, convention_, std::move(g)};
  }

  /// Expansion coefficients of f_j^†(t) in the site basis (column j of G(t)).
  ComplexVectorX<Scalar> column(int j, Scalar t) const {
    check_site(j);
    const ComplexVectorX<Scalar> ph = phases(t);
    ComplexVectorX<Scalar> out(n_sites());
    for (int i = 1; i <= n_sites(); ++i) out(i - 1) = entry_with_phases(i, j, ph);
    return out;
  }

 private:
  void check_site(int site) const {
    if (site < 1 || site > n_sites())
      throw std::out_of_range("site index " + std::to_string(site) + " outside 1.." + std::to_string(n_sites()));
  }

  ChainParams<Scalar> params_;
  Convention convention_;
  std::shared_ptr<const ModeTable<Scalar>> table_;
};

template <typename Scalar = double>
std::complex<Scalar> propagator_entry(int i, int j, Scalar t, const ChainParams<Scalar>& params,
                                      Convention convention) {
  return Propagator<Scalar>(params, convention).entry(i, j, t);
}

template <typename Scalar = double>
PropagatorMatrix<Scalar> propagator_matrix(Scalar t, const ChainParams<Scalar>& params, Convention convention) {
  return Propagator<Scalar>(params, convention).matrix(t);
}

template <typename Scalar = double>
ComplexVectorX<Scalar> fermion_heisenberg_coefficients(int j, Scalar t, const ChainParams<Scalar>& params,
                                                       Convention convention) {
  return Propagator<Scalar>(params, convention).column(j, t);
}

}  // namespace tch
