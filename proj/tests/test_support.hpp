#pragma once

#include <cmath>
#include <random>

#include "ebcommit/qmat.hpp"

namespace ebc::testing {

inline cplx gaussian_complex(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(gen), n(gen)};
}

/// Haar-random pure state.
inline StateVector random_pure(std::mt19937_64& gen, std::size_t dim) {
  std::array<cplx, 4> amps{};
  for (std::size_t i = 0; i < dim; ++i) amps[i] = gaussian_complex(gen);
  return StateVector::normalized(std::span<const cplx>(amps.data(), dim));
}

inline ComplexMatrix random_matrix(std::mt19937_64& gen, std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = gaussian_complex(gen);
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& gen, std::size_t dim) {
  const ComplexMatrix g = random_matrix(gen, dim);
  return (g + g.adjoint()) * 0.5;
}

/// Ginibre ensemble G G^dagger / tr, full rank almost surely.
inline DensityMatrix random_density(std::mt19937_64& gen, std::size_t dim) {
  const ComplexMatrix g = random_matrix(gen, dim);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityMatrix(m.hermitian_part());
}

}  // namespace ebc::testing
