#pragma once

// Seeded samplers for Haar-random states, unitaries and mixed states.

#include <cstdint>
#include <random>

#include "qit/qcore.hpp"

namespace qit {

using Rng = std::mt19937_64;

// Derives an independent stream seed for trial `index` of a run seeded with
// `seed` (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Matrix haar_unitary(int n, Rng& rng);
Vector haar_vector(int n, Rng& rng);
PureState haar_state(const Layout& layout, Rng& rng);

// rho = G G^dagger / tr with G an n x rank complex Ginibre matrix.
Matrix random_density_matrix(int n, int rank, Rng& rng);
DensityMatrix random_density(const Layout& layout, int rank, Rng& rng);

// Random Hermitian matrix with entries of unit scale.
Matrix random_hermitian(int n, Rng& rng);

double uniform(Rng& rng, double lo, double hi);

}  // namespace qit
