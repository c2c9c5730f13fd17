#include "birkhoff/core/batch.hpp"

#include <array>
#include <string>
#include <utility>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

namespace {

constexpr std::array<std::pair<SamplerId, std::string_view>, 5> kSamplerNames{{
    {SamplerId::gibbs, "gibbs"},
    {SamplerId::rejection, "rejection"},
    {SamplerId::vertex_mixture, "vertex_mixture"},
    {SamplerId::iid_exponential, "iid_exponential"},
    {SamplerId::dirichlet_rows, "dirichlet_rows"},
}};

}  // namespace

std::string_view to_string(SamplerId id) {
  for (const auto& [k, name] : kSamplerNames)
    if (k == id) return name;
  return "unknown";
}

SamplerId sampler_from_string(std::string_view name) {
  for (const auto& [k, n] : kSamplerNames)
    if (n == name) return k;
  throw PreconditionError("unknown sampler '" + std::string(name) + "'");
}

bool is_known_sampler(std::uint32_t raw) { return raw >= 1 && raw <= 5; }

void SampleBatch::push_back(SquareMatrix m) {
  if (m.size() != n_)
    throw PreconditionError("SampleBatch: matrix of side " + std::to_string(m.size()) +
                            " in a batch of side " + std::to_string(n_));
  matrices_.push_back(std::move(m));
}

void SampleBatch::append(const SampleBatch& other) {
  if (other.n_ != n_) throw PreconditionError("SampleBatch::append: side length mismatch");
  matrices_.insert(matrices_.end(), other.matrices_.begin(), other.matrices_.end());
}

}  // namespace birkhoff
