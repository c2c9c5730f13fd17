#include "birkhoff/samplers/models.hpp"

namespace birkhoff {

SquareMatrix iid_exponential_matrix(std::size_t n, RandomStream& stream) {
  SquareMatrix m(n);
  for (double& v : m.entries()) v = stream.exponential();
  return m;
}

SquareMatrix iid_exponential_matrix(std::size_t n, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  return iid_exponential_matrix(n, stream);
}

SquareMatrix dirichlet_row_matrix(std::size_t n, RandomStream& stream) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = m.row(i);
    double total = 0.0;
    for (double& v : row) {
      v = stream.exponential();
      total += v;
    }
    for (double& v : row) v /= total;
  }
  return m;
}

SquareMatrix dirichlet_row_matrix(std::size_t n, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  return dirichlet_row_matrix(n, stream);
}

SampleBatch iid_exponential_batch(std::size_t n, std::size_t count, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  SampleBatch batch(n, Provenance{SamplerId::iid_exponential, seed, 0, 0});
  batch.reserve(count);
  for (std::size_t k = 0; k < count; ++k) batch.push_back(iid_exponential_matrix(n, stream));
  return batch;
}

SampleBatch dirichlet_row_batch(std::size_t n, std::size_t count, std::uint64_t seed) {
  RandomStream stream(seed, 0);
  SampleBatch batch(n, Provenance{SamplerId::dirichlet_rows, seed, 0, 0});
  batch.reserve(count);
  for (std::size_t k = 0; k < count; ++k) batch.push_back(dirichlet_row_matrix(n, stream));
  return batch;
}

}  // namespace birkhoff
