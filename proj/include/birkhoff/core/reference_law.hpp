#pragma once

#include <string>
#include <utility>
#include <variant>

namespace birkhoff {

namespace law {
struct Exp1 {};
struct Beta {
  double a;
  double b;
};
/// Density (1/pi) sqrt(4 - x^2) on [0, 2].
struct QuarterCircle {};
/// Image of QuarterCircle under x -> x^2: density sqrt(x(4-x)) / (2 pi x) on [0, 4].
struct SquaredQuarterCircle {};
struct UniformInterval {
  double lo;
  double hi;
};
}  // namespace law

/// Analytic one-dimensional distribution used as a comparison target.
class ReferenceLaw {
 public:
  using Kind = std::variant<law::Exp1, law::Beta, law::QuarterCircle, law::SquaredQuarterCircle,
                            law::UniformInterval>;

  static ReferenceLaw exp1() { return ReferenceLaw(law::Exp1{}); }
  static ReferenceLaw beta(double a, double b);
  static ReferenceLaw quarter_circle() { return ReferenceLaw(law::QuarterCircle{}); }
  static ReferenceLaw squared_quarter_circle() { return ReferenceLaw(law::SquaredQuarterCircle{}); }
  static ReferenceLaw uniform(double lo, double hi);

  const Kind& kind() const noexcept { return kind_; }
  std::string name() const;

  double cdf(double x) const;
  double density(double x) const;
  double mean() const;
  /// Inverse cdf on (0, 1); the support endpoints at p = 0 and p = 1.
  double quantile(double p) const;
  /// Closed support; the upper end is +inf for Exp1.
  std::pair<double, double> support() const;

 private:
  explicit ReferenceLaw(Kind kind) : kind_(kind) {}
  Kind kind_;
};

}  // namespace birkhoff
