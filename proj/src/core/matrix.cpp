#include "birkhoff/core/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

SquareMatrix::SquareMatrix(std::size_t n, double fill) : n_(n), entries_(n * n, fill) {}

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n * n)
    throw PreconditionError("SquareMatrix: expected " + std::to_string(n * n) + " entries, got " +
                            std::to_string(entries_.size()));
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

SquareMatrix SquareMatrix::barycenter(std::size_t n) {
  return SquareMatrix(n, n == 0 ? 0.0 : 1.0 / static_cast<double>(n));
}

double SquareMatrix::max_entry() const noexcept {
  return entries_.empty() ? 0.0 : *std::max_element(entries_.begin(), entries_.end());
}

MarginSpec::MarginSpec(std::vector<double> row_sums, std::vector<double> col_sums)
    : row_sums_(std::move(row_sums)), col_sums_(std::move(col_sums)) {
  if (row_sums_.empty() || col_sums_.empty())
    throw PreconditionError("MarginSpec: need at least one row and one column");
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!std::all_of(row_sums_.begin(), row_sums_.end(), positive) ||
      !std::all_of(col_sums_.begin(), col_sums_.end(), positive))
    throw PreconditionError("MarginSpec: margins must be finite and strictly positive");
  const double rt = std::accumulate(row_sums_.begin(), row_sums_.end(), 0.0);
  const double ct = std::accumulate(col_sums_.begin(), col_sums_.end(), 0.0);
  if (std::abs(rt - ct) > 1e-12 * std::max(rt, ct))
    throw PreconditionError("MarginSpec: row total " + std::to_string(rt) +
                            " differs from column total " + std::to_string(ct));
  total_ = rt;
}

MarginSpec MarginSpec::constant(std::size_t m, std::size_t n, double total) {
  return MarginSpec(std::vector<double>(m, total / static_cast<double>(m)),
                    std::vector<double>(n, total / static_cast<double>(n)));
}

MarginSpec MarginSpec::scaled(double factor) const {
  if (!(factor > 0.0)) throw PreconditionError("MarginSpec::scaled: factor must be positive");
  auto rows = row_sums_;
  auto cols = col_sums_;
  for (auto& v : rows) v *= factor;
  for (auto& v : cols) v *= factor;
  return MarginSpec(std::move(rows), std::move(cols));
}

}  // namespace birkhoff
