#pragma once

#include <cstddef>
#include <cstdint>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/matrix.hpp"
#include "birkhoff/core/random.hpp"

namespace birkhoff {

// Comparison models. Neither is doubly stochastic.

/// n^2 independent Exp(1) entries.
SquareMatrix iid_exponential_matrix(std::size_t n, RandomStream& stream);
SquareMatrix iid_exponential_matrix(std::size_t n, std::uint64_t seed);

/// Rows independent and uniform on the simplex (a uniform stochastic matrix).
SquareMatrix dirichlet_row_matrix(std::size_t n, RandomStream& stream);
SquareMatrix dirichlet_row_matrix(std::size_t n, std::uint64_t seed);

/// `count` matrices drawn sequentially from stream (seed, 0).
SampleBatch iid_exponential_batch(std::size_t n, std::size_t count, std::uint64_t seed);
SampleBatch dirichlet_row_batch(std::size_t n, std::size_t count, std::uint64_t seed);

}  // namespace birkhoff
