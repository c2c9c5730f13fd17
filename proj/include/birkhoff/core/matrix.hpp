#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace birkhoff {

/// Dense real n x n matrix stored row-major.
///
/// Carries doubly stochastic samples as well as derived matrices (iid
/// exponential comparison matrices, centred/rescaled copies). The class
/// itself enforces only the shape; stochasticity is checked separately by
/// check_doubly_stochastic().
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0);
  SquareMatrix(std::size_t n, std::vector<double> entries);

  static SquareMatrix identity(std::size_t n);
  /// All entries 1/n: the centre of the Birkhoff polytope.
  static SquareMatrix barycenter(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {entries_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * n_, n_};
  }

  std::span<double> entries() noexcept { return entries_; }
  std::span<const double> entries() const noexcept { return entries_; }

  double max_entry() const noexcept;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

/// Row and column sums of an m x n transportation polytope.
class MarginSpec {
 public:
  /// Throws PreconditionError unless all margins are strictly positive and
  /// both vectors have the same total to 1e-12 relative.
  MarginSpec(std::vector<double> row_sums, std::vector<double> col_sums);

  /// Row sums t/m and column sums t/n.
  static MarginSpec constant(std::size_t m, std::size_t n, double total);
  /// The Birkhoff polytope: all margins 1.
  static MarginSpec birkhoff(std::size_t n) { return constant(n, n, static_cast<double>(n)); }

  std::size_t rows() const noexcept { return row_sums_.size(); }
  std::size_t cols() const noexcept { return col_sums_.size(); }
  std::span<const double> row_sums() const noexcept { return row_sums_; }
  std::span<const double> col_sums() const noexcept { return col_sums_; }
  double total() const noexcept { return total_; }
  /// Dimension (m-1)(n-1) of the free block.
  std::size_t free_dimension() const noexcept { return (rows() - 1) * (cols() - 1); }

  MarginSpec scaled(double factor) const;

 private:
  std::vector<double> row_sums_;
  std::vector<double> col_sums_;
  double total_ = 0.0;
};

}  // namespace birkhoff
