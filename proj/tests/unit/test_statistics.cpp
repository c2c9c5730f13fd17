#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/error.hpp"
#include "birkhoff/core/random.hpp"
#include "birkhoff/samplers/gibbs.hpp"
#include "birkhoff/samplers/models.hpp"
#include "birkhoff/statistics/distances.hpp"
#include "birkhoff/statistics/mixing.hpp"
#include "birkhoff/statistics/moments.hpp"
#include "birkhoff/statistics/spectral.hpp"

using namespace birkhoff;

namespace {

// Two-sided (Kogbetliantz) Jacobi SVD: each pivot pair is made symmetric by a
// left rotation, then diagonalised by a symmetric Jacobi rotation applied on
// both sides. Returns singular values ascending.
std::vector<double> jacobi_singular_values(std::vector<double> a, std::size_t n) {
  auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
  auto rotate_rows = [&](std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u = at(p, j), v = at(q, j);
      at(p, j) = c * u + s * v;
      at(q, j) = -s * u + c * v;
    }
  };
  auto rotate_cols = [&](std::size_t p, std::size_t q, double c, double s) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = at(i, p), v = at(i, q);
      at(i, p) = c * u - s * v;
      at(i, q) = s * u + c * v;
    }
  };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += at(i, j) * at(i, j);
        if (i != j) off += at(i, j) * at(i, j);
      }
    if (off <= 1e-30 * total || total == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double w = at(p, p), x = at(p, q), y = at(q, p), z = at(q, q);
        if (x == 0.0 && y == 0.0) continue;
        double c1 = 1.0, s1 = 0.0;
        if (w + z != 0.0) {
          const double t = (y - x) / (w + z);
          c1 = 1.0 / std::sqrt(1.0 + t * t);
          s1 = t * c1;
        } else if (x != y) {
          c1 = 0.0;
          s1 = 1.0;
        }
        rotate_rows(p, q, c1, s1);
        const double app = at(p, p), apq = 0.5 * (at(p, q) + at(q, p)), aqq = at(q, q);
        if (apq == 0.0) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        rotate_rows(p, q, c, -s);
        rotate_cols(p, q, c, s);
      }
  }
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) sigma[i] = std::abs(at(i, i));
  std::sort(sigma.begin(), sigma.end());
  return sigma;
}

double ks_oracle(std::vector<double> x, const ReferenceLaw& law) {
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double F = law.cdf(x[k]);
    worst = std::max({worst, std::abs(F - (k + 1) / N), std::abs(F - k / N)});
  }
  return worst;
}

double energy_oracle(const std::vector<double>& x, const std::vector<double>& y, std::size_t dim) {
  auto dist = [&](const double* a, const double* b) {
    double s = 0;
    for (std::size_t d = 0; d < dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
    return std::sqrt(s);
  };
  const std::size_t nx = x.size() / dim, ny = y.size() / dim;
  double xy = 0, xx = 0, yy = 0;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) xy += dist(&x[i * dim], &y[j * dim]);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j) xx += dist(&x[i * dim], &x[j * dim]);
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = 0; j < ny; ++j) yy += dist(&y[i * dim], &y[j * dim]);
  return 2 * xy / (nx * ny) - xx / (nx * nx) - yy / (ny * ny);
}

std::vector<double> exact_quantiles(const ReferenceLaw& law, std::size_t N) {
  std::vector<double> x(N);
  for (std::size_t k = 0; k < N; ++k) x[k] = law.quantile((k + 0.5) / static_cast<double>(N));
  return x;
}

}  // namespace

TEST_SUITE("statistics") {

TEST_CASE("ks_distance") {
  const auto exp1 = ReferenceLaw::exp1();
  CHECK(ks_distance(EmpiricalDistribution(exact_quantiles(exp1, 1000)), exp1) <= 0.5 / 1000 + 1e-12);
  CHECK(ks_distance(EmpiricalDistribution({0.0}), exp1) == doctest::Approx(1.0));
  RandomStream s(1, 0);
  std::vector<double> x(2000);
  for (auto& v : x) v = s.exponential();
  CHECK(ks_distance(EmpiricalDistribution(x), exp1) == doctest::Approx(ks_oracle(x, exp1)).epsilon(1e-12));
  // Permutation invariance.
  auto y = x;
  std::reverse(y.begin(), y.end());
  CHECK(ks_distance(EmpiricalDistribution(y), exp1) == ks_distance(EmpiricalDistribution(x), exp1));

  // 95% Kolmogorov quantile 1.358 / sqrt(N): check the rate of exceedance over 40 repetitions.
  int within = 0;
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<double> z(100000);
    for (auto& v : z) v = s.exponential();
    within += ks_distance(EmpiricalDistribution(z), exp1) < 1.95 / std::sqrt(1e5);
  }
  CHECK(within >= 38);
}

TEST_CASE("ks_two_sample") {
  const EmpiricalDistribution a({1.0, 2.0, 3.0});
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, EmpiricalDistribution({10.0, 11.0})) == 1.0);
  CHECK(ks_two_sample(a, EmpiricalDistribution({2.5})) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("tv_binned") {
  const auto exp1 = ReferenceLaw::exp1();
  RandomStream s(2, 0);
  std::vector<double> x(100000);
  for (auto& v : x) v = s.exponential();
  const auto tv = tv_binned(EmpiricalDistribution(x), exp1, BinGrid{0.0, 12.0, 64});
  CHECK(tv.value < 0.02);
  CHECK(tv.std_error > 0.0);
  CHECK(tv.std_error < 0.01);
  // Point mass at 0: the law outside the first bin.
  const auto point = tv_binned(EmpiricalDistribution({0.0}), exp1, BinGrid{0.0, 12.0, 64});
  CHECK(point.value == doctest::Approx(std::exp(-12.0 / 64)).epsilon(1e-9));
  // Exact quantiles carry the law's mass vector up to one point per bin.
  const auto q = tv_binned(EmpiricalDistribution(exact_quantiles(exp1, 200000)), exp1, BinGrid{0.0, 12.0, 64});
  CHECK(q.value < 64.0 / 200000);
  // Bounds on arbitrary input.
  for (double c : {-5.0, 0.3, 100.0}) {
    const auto t = tv_binned(EmpiricalDistribution({c, c + 1}), exp1, 16);
    CHECK(t.value >= 0.0);
    CHECK(t.value <= 1.0);
  }
}

TEST_CASE("wasserstein1") {
  const auto qc = ReferenceLaw::quarter_circle();
  CHECK(wasserstein1(EmpiricalDistribution(std::vector<double>(100, 0.0)), qc) ==
        doctest::Approx(8.0 / (3.0 * std::numbers::pi)).epsilon(1e-4));
  CHECK(wasserstein1(EmpiricalDistribution(exact_quantiles(qc, 4000)), qc) < 1.0 / 4000);
  const EmpiricalDistribution a({0.1, 0.5, 0.9});
  CHECK(wasserstein1_two_sample(a, a) == 0.0);
  CHECK(wasserstein1_two_sample(a, a.transformed([](double v) { return v + 0.25; })) == doctest::Approx(0.25));
  // Scaling on uniform laws.
  RandomStream s(3, 0);
  std::vector<double> x(5000);
  for (auto& v : x) v = s.uniform() * 0.9;
  const double base = wasserstein1(EmpiricalDistribution(x), ReferenceLaw::uniform(0, 1));
  const double scaled =
      wasserstein1(EmpiricalDistribution(x).transformed([](double v) { return 3 * v; }), ReferenceLaw::uniform(0, 3));
  CHECK(scaled == doctest::Approx(3 * base).epsilon(1e-9));
}

TEST_CASE("energy distance matches the brute force V-statistic") {
  RandomStream s(4, 0);
  std::vector<double> x(3 * 40), y(3 * 55);
  for (auto& v : x) v = s.exponential();
  for (auto& v : y) v = s.uniform();
  CHECK(energy_distance(x, y, 3) == doctest::Approx(energy_oracle(x, y, 3)).epsilon(1e-12));
  CHECK(energy_distance(x, x, 3) == doctest::Approx(0.0));
  CHECK(mean_self_distance(std::vector<double>{0.0, 1.0}, 1) == doctest::Approx(0.5));
}

TEST_CASE("tv_binned_2d") {
  RandomStream s(5, 0);
  std::vector<double> ax(100000), ay(100000), bx(100000), by(100000);
  for (std::size_t k = 0; k < ax.size(); ++k) {
    ax[k] = s.uniform();
    ay[k] = s.uniform();
    bx[k] = s.uniform();
    by[k] = s.uniform();
  }
  CHECK(tv_binned_2d(ax, ay, bx, by, 8) < 0.03);
  // Perfectly dependent vs independent pairs differ.
  CHECK(tv_binned_2d(ax, ax, bx, by, 8) > 0.5);
  CHECK(tv_binned_2d(ax, ay, ax, ay, 8) == doctest::Approx(0.0));
}

TEST_CASE("singular values") {
  SUBCASE("barycenter and identity") {
    const auto zero = singular_values(SquareMatrix::barycenter(5));
    CHECK(zero.max() < 1e-12);
    const auto id = singular_values(SquareMatrix::identity(6));
    CHECK(id[0] < 1e-12);
    for (std::size_t i = 1; i < 6; ++i) CHECK(id[i] == doctest::Approx(std::sqrt(6.0)));
  }
  SUBCASE("n=2 closed form") {
    const double a = 0.8;
    const auto sv = singular_values(SquareMatrix(2, std::vector<double>{a, 1 - a, 1 - a, a}));
    CHECK(sv[0] < 1e-12);
    CHECK(sv[1] == doctest::Approx(std::sqrt(2.0) * std::abs(2 * a - 1)));
  }
  SUBCASE("agrees with the Jacobi oracle and the Frobenius identity") {
    for (std::size_t n : {7u, 16u, 64u}) {
      const auto batch = gibbs_chain(GibbsConfig::defaults(n), 2, 40 + n);
      for (const auto& m : batch) {
        const auto sv = singular_values(m);
        std::vector<double> centred(n * n);
        const double r = std::sqrt(static_cast<double>(n));
        for (std::size_t k = 0; k < n * n; ++k) centred[k] = r * (m.entries()[k] - 1.0 / n);
        const auto oracle = jacobi_singular_values(centred, n);
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(sv[i] - oracle[i]) <= 1e-8 * oracle.back());
        // Relative accuracy on the well separated part of the spectrum.
        for (std::size_t i = 0; i < n; ++i)
          if (oracle[i] > 1e-3) CHECK(std::abs(sv[i] - oracle[i]) <= 1e-8 * oracle[i]);
        CHECK(frobenius_identity_error(m, sv) < 1e-8);
      }
    }
  }
  SUBCASE("precondition") {
    auto m = SquareMatrix::barycenter(3);
    m(0, 0) = 0.9;
    CHECK_THROWS_AS(singular_values(m), PreconditionError);
  }
}

TEST_CASE("spectral_test") {
  SUBCASE("barycenter gives the quarter-circle mean") {
    SampleBatch b(256, {});
    b.push_back(SquareMatrix::barycenter(256));
    const auto rep = spectral_test(b);
    CHECK(rep.quarter_circle.value == doctest::Approx(8.0 / (3.0 * std::numbers::pi)).epsilon(1e-3));
    CHECK(rep.squared.value == doctest::Approx(1.0).epsilon(1e-3));
  }
  SUBCASE("iid exponential model obeys the quarter circle") {
    const std::size_t n = 256;
    std::vector<double> pooled;
    for (std::uint64_t k = 0; k < 20; ++k) {
      auto m = iid_exponential_matrix(n, 100 + k);
      // Centre at the mean 1 and scale by 1/sqrt(n): same normalisation as sqrt(n)(X - 1/n) for X = M/n.
      for (auto& v : m.entries()) v /= static_cast<double>(n);
      const auto sv = rescaled_singular_values(m);
      pooled.insert(pooled.end(), sv.values().begin(), sv.values().end());
    }
    const auto rep = spectral_test(EmpiricalDistribution(pooled));
    CHECK(rep.quarter_circle.value < 0.05);
    CHECK(rep.squared.value < 0.10);
  }
}

TEST_CASE("mixing_profile") {
  SUBCASE("barycenter mixes at once") {
    const auto r = mixing_profile(SquareMatrix::barycenter(5), 3);
    CHECK(r.d[0] < 1e-15);
    REQUIRE(r.mixing_time);
    CHECK(*r.mixing_time == 1);
  }
  SUBCASE("identity never mixes") {
    const auto r = mixing_profile(SquareMatrix::identity(2), 4);
    for (double d : r.d) CHECK(d == doctest::Approx(0.5));
    CHECK_FALSE(r.mixing_time);
  }
  SUBCASE("single state") {
    const auto r = mixing_profile(SquareMatrix::identity(1), 2);
    CHECK(r.d[0] == 0.0);
    CHECK(*r.mixing_time == 1);
  }
  SUBCASE("monotone on sampled matrices and close to 1/e at n=128") {
    const auto batch = gibbs_chain(GibbsConfig::defaults(128), 3, 17);
    for (const auto& m : batch) {
      const auto r = mixing_profile(m, 4);
      for (std::size_t t = 0; t + 1 < r.d.size(); ++t) CHECK(r.d[t + 1] <= r.d[t] + 1e-12);
      CHECK(r.d_row_mean[0] == doctest::Approx(std::exp(-1.0)).epsilon(0.15));
      CHECK(r.d[1] < 0.1);
    }
  }
  SUBCASE("Dirichlet-row oracle for the pooled d(1) limit") {
    // E (1/2) sum_j |Y_j - 1/n| over a Dirichlet row tends to 1/e.
    RandomStream s(6, 0);
    double acc = 0;
    const std::size_t n = 128;
    for (int k = 0; k < 200; ++k) {
      const auto m = dirichlet_row_matrix(n, s);
      for (std::size_t i = 0; i < n; ++i) {
        double row = 0;
        for (std::size_t j = 0; j < n; ++j) row += std::abs(m(i, j) - 1.0 / n);
        acc += 0.5 * row;
      }
    }
    CHECK(acc / (200.0 * n) == doctest::Approx(std::exp(-1.0)).epsilon(0.02));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(mixing_profile(SquareMatrix::identity(3), 0), PreconditionError);
    CHECK_THROWS_AS(mixing_profile(SquareMatrix(3, 0.5), 2), PreconditionError);
  }
}

TEST_CASE("moments and max entry") {
  const MomentSpec first{{{0, 0}}, {1}};
  SampleBatch bar(4, {});
  bar.push_back(SquareMatrix::barycenter(4));
  const auto est = joint_moments(bar, first);
  CHECK(est.mean == doctest::Approx(1.0));
  CHECK(moment_product(SquareMatrix::identity(4), MomentSpec{{{0, 0}, {1, 1}}, {2, 1}}) == doctest::Approx(64.0));
  CHECK_THROWS_AS((MomentSpec{{{0, 0}, {0, 0}}, {1, 1}}.validate(4)), PreconditionError);
  CHECK_THROWS_AS((MomentSpec{{{0, 0}}, {0}}.validate(4)), PreconditionError);
  CHECK_THROWS_AS((MomentSpec{{{4, 0}}, {1}}.validate(4)), PreconditionError);

  const auto gibbs = gibbs_chain(GibbsConfig::defaults(8), 2000, 31);
  const auto m1 = joint_moments(gibbs, first);
  CHECK(std::abs(m1.mean - 1.0) < 4 * m1.std_error);

  SampleBatch b(10, {});
  b.push_back(SquareMatrix::barycenter(10));
  CHECK(max_entry_stat(b, 0.5).fraction == 0.0);
  SampleBatch id(10, {});
  id.push_back(SquareMatrix::identity(10));
  const auto rep = max_entry_stat(id, 0.5);
  CHECK(rep.fraction == 1.0);
  CHECK(rep.threshold == doctest::Approx(2.5 * std::log(10.0) / 10.0));
  CHECK_THROWS_AS(exceeds_max_entry_bound(SquareMatrix::identity(3), 0.0), PreconditionError);
}

TEST_CASE("submatrix independence") {
  SUBCASE("iid exponential blocks are uncorrelated") {
    std::vector<double> blocks;
    RandomStream s(7, 0);
    for (int k = 0; k < 10000 * 4; ++k) blocks.push_back(s.exponential());
    const auto rep = submatrix_independence_test(blocks, 100, 2, 8);
    REQUIRE(rep.max_abs_correlation);
    CHECK(*rep.max_abs_correlation < 0.02);
    CHECK(rep.energy_distance <= 3 * rep.reference_self_distance);
  }
  SUBCASE("constant input flags zero variance") {
    SampleBatch b(9, {});
    for (int k = 0; k < 20; ++k) b.push_back(SquareMatrix::barycenter(9));
    const auto rep = submatrix_independence_test(b, 2, 1);
    CHECK(rep.zero_variance);
    CHECK_FALSE(rep.max_abs_correlation);
  }
  SUBCASE("regime warning and preconditions") {
    SampleBatch b(16, {});
    for (int k = 0; k < 5; ++k) b.push_back(SquareMatrix::barycenter(16));
    CHECK_FALSE(submatrix_independence_test(b, 4, 1).warnings.empty());
    CHECK_THROWS_AS(submatrix_independence_test(b, 5, 1), PreconditionError);
  }
  const auto block = rescaled_block(SquareMatrix::barycenter(4), 2);
  CHECK(block == std::vector<double>{1.0, 1.0, 1.0, 1.0});
}

}  // TEST_SUITE
