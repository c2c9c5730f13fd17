#include "birkhoff/core/reference_law.hpp"

#include <boost/math/distributions/beta.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "birkhoff/core/error.hpp"

namespace birkhoff {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

double quarter_circle_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 2.0) return 1.0;
  return (0.5 * x * std::sqrt(4.0 - x * x) + 2.0 * std::asin(0.5 * x)) / std::numbers::pi;
}

double quarter_circle_quantile(double p) {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 2.0;
  boost::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(
      [p](double x) { return quarter_circle_cdf(x) - p; }, 0.0, 2.0, -p, 1.0 - p,
      boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (lo + hi);
}

boost::math::beta_distribution<double> beta_dist(const law::Beta& b) { return {b.a, b.b}; }

}  // namespace

ReferenceLaw ReferenceLaw::beta(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw PreconditionError("Beta law needs positive shape parameters");
  return ReferenceLaw(law::Beta{a, b});
}

ReferenceLaw ReferenceLaw::uniform(double lo, double hi) {
  if (!(lo < hi)) throw PreconditionError("UniformInterval needs lo < hi");
  return ReferenceLaw(law::UniformInterval{lo, hi});
}

std::string ReferenceLaw::name() const {
  return std::visit(overloaded{
                        [](const law::Exp1&) -> std::string { return "Exp(1)"; },
                        [](const law::Beta& b) -> std::string {
                          std::ostringstream os;
                          os << "Beta(" << b.a << "," << b.b << ")";
                          return os.str();
                        },
                        [](const law::QuarterCircle&) -> std::string { return "QuarterCircle"; },
                        [](const law::SquaredQuarterCircle&) -> std::string {
                          return "SquaredQuarterCircle";
                        },
                        [](const law::UniformInterval& u) -> std::string {
                          std::ostringstream os;
                          os << "Uniform[" << u.lo << "," << u.hi << "]";
                          return os.str();
                        },
                    },
                    kind_);
}

double ReferenceLaw::cdf(double x) const {
  return std::visit(
      overloaded{
          [x](const law::Exp1&) { return x <= 0.0 ? 0.0 : -std::expm1(-x); },
          [x](const law::Beta& b) {
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return 1.0;
            return boost::math::cdf(beta_dist(b), x);
          },
          [x](const law::QuarterCircle&) { return quarter_circle_cdf(x); },
          [x](const law::SquaredQuarterCircle&) {
            return x <= 0.0 ? 0.0 : quarter_circle_cdf(std::sqrt(x));
          },
          [x](const law::UniformInterval& u) {
            if (x <= u.lo) return 0.0;
            if (x >= u.hi) return 1.0;
            return (x - u.lo) / (u.hi - u.lo);
          },
      },
      kind_);
}

double ReferenceLaw::density(double x) const {
  return std::visit(
      overloaded{
          [x](const law::Exp1&) { return x < 0.0 ? 0.0 : std::exp(-x); },
          [x](const law::Beta& b) {
            if (x < 0.0 || x > 1.0) return 0.0;
            if ((x == 0.0 && b.a < 1.0) || (x == 1.0 && b.b < 1.0)) return kInf;
            return boost::math::pdf(beta_dist(b), x);
          },
          [x](const law::QuarterCircle&) {
            return (x < 0.0 || x > 2.0) ? 0.0 : std::sqrt(4.0 - x * x) / std::numbers::pi;
          },
          [x](const law::SquaredQuarterCircle&) {
            if (x < 0.0 || x > 4.0) return 0.0;
            if (x == 0.0) return kInf;
            return std::sqrt(x * (4.0 - x)) / (2.0 * std::numbers::pi * x);
          },
          [x](const law::UniformInterval& u) {
            return (x < u.lo || x > u.hi) ? 0.0 : 1.0 / (u.hi - u.lo);
          },
      },
      kind_);
}

double ReferenceLaw::mean() const {
  return std::visit(overloaded{
                        [](const law::Exp1&) { return 1.0; },
                        [](const law::Beta& b) { return b.a / (b.a + b.b); },
                        [](const law::QuarterCircle&) { return 8.0 / (3.0 * std::numbers::pi); },
                        [](const law::SquaredQuarterCircle&) { return 1.0; },
                        [](const law::UniformInterval& u) { return 0.5 * (u.lo + u.hi); },
                    },
                    kind_);
}

double ReferenceLaw::quantile(double p) const {
  if (std::isnan(p)) throw PreconditionError("quantile of NaN probability");
  return std::visit(overloaded{
                        [p](const law::Exp1&) { return p >= 1.0 ? kInf : -std::log1p(-std::max(p, 0.0)); },
                        [p](const law::Beta& b) {
                          if (p <= 0.0) return 0.0;
                          if (p >= 1.0) return 1.0;
                          return boost::math::quantile(beta_dist(b), p);
                        },
                        [p](const law::QuarterCircle&) { return quarter_circle_quantile(p); },
                        [p](const law::SquaredQuarterCircle&) {
                          const double q = quarter_circle_quantile(p);
                          return q * q;
                        },
                        [p](const law::UniformInterval& u) {
                          return u.lo + std::clamp(p, 0.0, 1.0) * (u.hi - u.lo);
                        },
                    },
                    kind_);
}

std::pair<double, double> ReferenceLaw::support() const {
  return std::visit(overloaded{
                        [](const law::Exp1&) { return std::pair{0.0, kInf}; },
                        [](const law::Beta&) { return std::pair{0.0, 1.0}; },
                        [](const law::QuarterCircle&) { return std::pair{0.0, 2.0}; },
                        [](const law::SquaredQuarterCircle&) { return std::pair{0.0, 4.0}; },
                        [](const law::UniformInterval& u) { return std::pair{u.lo, u.hi}; },
                    },
                    kind_);
}

}  // namespace birkhoff
