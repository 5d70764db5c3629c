#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace tch {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using ComplexMatrixX = MatrixX<std::complex<Scalar>>;
template <typename Scalar>
using ComplexVectorX = VectorX<std::complex<Scalar>>;

/// Open XX chain in a transverse field: N spins, hopping J, chemical potential mu.
template <typename Scalar = double>
struct ChainParams {
  int n_sites = 2;
  Scalar coupling_j = Scalar(1);
  Scalar mu = Scalar(0);

  void validate() const {
    if (n_sites < 2)
      throw std::invalid_argument("chain needs at least 2 sites, got " + std::to_string(n_sites));
    if (!std::isfinite(static_cast<double>(coupling_j)) || !std::isfinite(static_cast<double>(mu)))
      throw std::invalid_argument("coupling_j and mu must be finite");
  }

  friend bool operator==(const ChainParams&, const ChainParams&) = default;
};

/// Sign convention of the single-particle eigenvectors.
/// `plain`: u_jk ~ U_{j-1}(cos k). `alternating`: u_jk ~ (-1)^{j-1} U_{j-1}(cos k).
enum class Convention { plain, alternating };

inline std::string_view to_string(Convention c) {
  return c == Convention::plain ? "plain" : "alternating";
}

inline Convention convention_from_string(std::string_view s) {
  if (s == "plain") return Convention::plain;
  if (s == "alternating") return Convention::alternating;
  throw std::invalid_argument("unknown convention '" + std::string(s) + "'");
}

template <typename Scalar>
constexpr Scalar pi_v = Scalar(3.141592653589793238462643383279502884L);

}  // namespace tch
