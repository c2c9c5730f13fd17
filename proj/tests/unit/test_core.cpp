#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "birkhoff/core/batch.hpp"
#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/error.hpp"
#include "birkhoff/core/matrix.hpp"
#include "birkhoff/core/random.hpp"
#include "birkhoff/core/reference_law.hpp"

using namespace birkhoff;

namespace {

// Plain alternating normalisation, used as an oracle for sinkhorn_repair.
SquareMatrix sinkhorn_oracle(SquareMatrix m, int sweeps) {
  const std::size_t n = m.size();
  for (int s = 0; s < sweeps; ++s) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) sum += m(i, j);
      for (std::size_t j = 0; j < n; ++j) m(i, j) /= sum;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) sum += m(i, j);
      for (std::size_t i = 0; i < n; ++i) m(i, j) /= sum;
    }
  }
  return m;
}

// Composite Simpson on [a, b] with k (even) panels.
template <class F>
double simpson(F f, double a, double b, int k) {
  const double h = (b - a) / k;
  double s = f(a) + f(b);
  for (int i = 1; i < k; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("core") {

TEST_CASE("square matrix basics") {
  const auto id = SquareMatrix::identity(3);
  CHECK(id(0, 0) == 1.0);
  CHECK(id(0, 1) == 0.0);
  const auto bar = SquareMatrix::barycenter(4);
  CHECK(bar.max_entry() == doctest::Approx(0.25));
  CHECK(bar.row(2).size() == 4);
  CHECK_THROWS_AS(SquareMatrix(2, std::vector<double>{1.0, 2.0, 3.0}), PreconditionError);
}

TEST_CASE("margin spec validation") {
  const MarginSpec spec({1.0, 2.0}, {1.5, 1.5});
  CHECK(spec.total() == doctest::Approx(3.0));
  CHECK(spec.free_dimension() == 1);
  CHECK_THROWS_AS(MarginSpec({1.0, 2.0}, {1.0, 1.0}), PreconditionError);
  CHECK_THROWS_AS(MarginSpec({1.0, 0.0}, {0.5, 0.5}), PreconditionError);
  CHECK_THROWS_AS(MarginSpec({1.0, -1.0}, {0.0, 0.0}), PreconditionError);
  const auto b = MarginSpec::birkhoff(3);
  CHECK(b.rows() == 3);
  CHECK(b.row_sums()[1] == 1.0);
  const auto scaled = b.scaled(2.0);
  CHECK(scaled.col_sums()[0] == 2.0);
  CHECK(scaled.total() == 6.0);
  // Totals equal to 1e-12 relative are accepted.
  CHECK_NOTHROW(MarginSpec({1.0, 1.0 + 1e-13}, {1.0, 1.0}));
}

TEST_CASE("check_doubly_stochastic examples") {
  CHECK(check_doubly_stochastic(SquareMatrix::identity(3), 1e-9).ok);
  CHECK(check_doubly_stochastic(SquareMatrix::barycenter(4), 1e-9).ok);

  auto m = SquareMatrix::barycenter(4);
  m(2, 1) += 1e-3;
  const auto r = check_doubly_stochastic(m, 1e-9);
  CHECK_FALSE(r.ok);
  CHECK(r.max_violation == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK((r.site == ViolationSite::row_sum || r.site == ViolationSite::column_sum));
  CHECK(r.index == (r.site == ViolationSite::row_sum ? 2u : 1u));

  auto neg = SquareMatrix::identity(2);
  neg(0, 0) = -0.25;
  neg(0, 1) = 1.25;
  neg(1, 0) = 1.25;
  neg(1, 1) = -0.25;
  const auto rn = check_doubly_stochastic(neg, 1e-9);
  CHECK_FALSE(rn.ok);
  CHECK(rn.site == ViolationSite::entry);

  auto bad = SquareMatrix::barycenter(3);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(check_doubly_stochastic(bad, 1e-9), CorruptedStateError);
}

TEST_CASE("row and column sums with many entries are compensated") {
  SquareMatrix m(200, 1.0 / 200.0);
  for (double s : row_sums(m)) CHECK(std::abs(s - 1.0) < 1e-14);
  for (double s : column_sums(m)) CHECK(std::abs(s - 1.0) < 1e-14);
}

TEST_CASE("clamp_rounding_negatives") {
  SquareMatrix m(2, std::vector<double>{-1e-13, 0.5, -1e-3, 0.0});
  CHECK(clamp_rounding_negatives(m) == 1);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(1, 0) == -1e-3);
}

TEST_CASE("sinkhorn_repair examples") {
  SUBCASE("fixed point") {
    const auto id = SquareMatrix::identity(5);
    CHECK(sinkhorn_repair(id, 1e-12) == id);
    const auto bar = SquareMatrix::barycenter(7);
    CHECK(sinkhorn_repair(bar, 1e-12) == bar);
  }
  SUBCASE("already near exact") {
    const double e = 1e-10;
    const SquareMatrix m(2, std::vector<double>{0.5 + e, 0.5 - e, 0.5 - e, 0.5 + e});
    const auto out = sinkhorn_repair(m, 1e-12);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(out.entries()[k] - m.entries()[k]) < 1e-12);
  }
  SUBCASE("row sum drift matches the oracle") {
    const std::size_t n = 5;
    RandomStream s(11, 0);
    // Random doubly stochastic start: convex combination of permutations.
    SquareMatrix m(n, 0.0);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int k = 0; k < 6; ++k) {
      for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[s.below(i + 1)]);
      for (std::size_t i = 0; i < n; ++i) m(i, perm[i]) += 1.0 / 6.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      m(0, j) *= 1.0 + 1e-7;
      m(1, j) *= 1.0 - 1e-7;
    }
    const auto out = sinkhorn_repair(m, 1e-12);
    CHECK(check_doubly_stochastic(out, 1e-12).ok);
    const auto oracle = sinkhorn_oracle(m, 200);
    for (std::size_t k = 0; k < n * n; ++k) CHECK(std::abs(out.entries()[k] - oracle.entries()[k]) < 1e-12);
  }
  SUBCASE("preconditions") {
    auto far = SquareMatrix::barycenter(3);
    far(0, 0) += 1e-3;
    CHECK_THROWS_AS(sinkhorn_repair(far, 1e-12), PreconditionError);
    auto neg = SquareMatrix::barycenter(3);
    neg(0, 0) = -1e-6;
    neg(0, 1) += 1e-6;
    CHECK_THROWS_AS(sinkhorn_repair(neg, 1e-12), PreconditionError);
  }
}

TEST_CASE("random streams") {
  SUBCASE("determinism") {
    auto a = seeded_stream(1, 0);
    auto b = seeded_stream(1, 0);
    for (int k = 0; k < 1000; ++k) CHECK(a.next_u64() == b.next_u64());
  }
  SUBCASE("stream independence") {
    auto a = seeded_stream(1, 0);
    auto b = seeded_stream(1, 1);
    const int N = 100000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int k = 0; k < N; ++k) {
      const double x = a.uniform(), y = b.uniform();
      sa += x;
      sb += y;
      sab += x * y;
      saa += x * x;
      sbb += y * y;
    }
    const double cov = sab / N - (sa / N) * (sb / N);
    const double corr = cov / std::sqrt((saa / N - sa * sa / N / N) * (sbb / N - sb * sb / N / N));
    CHECK(std::abs(corr) < 0.01);
  }
  SUBCASE("seed sensitivity") {
    auto a = seeded_stream(1, 0);
    auto b = seeded_stream(2, 0);
    int same = 0;
    for (int k = 0; k < 100; ++k) same += a.next_u64() == b.next_u64();
    CHECK(same == 0);
  }
  SUBCASE("ranges") {
    auto s = seeded_stream(3, 0);
    std::vector<int> counts(7, 0);
    for (int k = 0; k < 70000; ++k) {
      const double u = s.uniform();
      CHECK((u >= 0.0 && u < 1.0));
      const auto b = s.below(7);
      REQUIRE(b < 7);
      counts[b]++;
      CHECK(s.exponential() >= 0.0);
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  }
  SUBCASE("derived seeds differ") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 9) == derive_seed(5, 9));
  }
}

TEST_CASE("empirical distribution") {
  const EmpiricalDistribution e({3.0, 1.0, 2.0, 2.0});
  CHECK(e.size() == 4);
  CHECK(e[0] == 1.0);
  CHECK(e[3] == 3.0);
  CHECK(std::is_sorted(e.values().begin(), e.values().end()));
  CHECK(e.ecdf(0.5) == 0.0);
  CHECK(e.ecdf(1.0) == 0.25);
  CHECK(e.ecdf(2.0) == 0.75);
  CHECK(e.ecdf(10.0) == 1.0);
  // ECDF at value[k] is (k+1)/count for distinct values.
  const EmpiricalDistribution d({0.4, 0.1, 0.3, 0.2});
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(d.ecdf(d[k]) == doctest::Approx((k + 1) / 4.0));
  CHECK(e.mean() == doctest::Approx(2.0));
  CHECK(e.variance() == doctest::Approx(2.0 / 3.0));
  CHECK(e.quantile(0.0) == 1.0);
  CHECK(e.quantile(1.0) == 3.0);
  const auto sq = e.transformed([](double x) { return -x; });
  CHECK(sq[0] == -3.0);
  CHECK_THROWS_AS(EmpiricalDistribution({1.0, std::numeric_limits<double>::infinity()}), PreconditionError);

  std::vector<double> many(100001, 0.1);
  CHECK(pairwise_sum(many) == doctest::Approx(10000.1).epsilon(1e-14));
}

TEST_CASE("reference laws integrate to one and have the stated means") {
  struct Case {
    ReferenceLaw law;
    double lo, hi, mean;
  };
  const std::vector<Case> cases{
      {ReferenceLaw::exp1(), 0.0, 60.0, 1.0},
      {ReferenceLaw::beta(2, 4), 0.0, 1.0, 1.0 / 3.0},
      {ReferenceLaw::quarter_circle(), 0.0, 2.0, 8.0 / (3.0 * std::numbers::pi)},
      {ReferenceLaw::uniform(-1.0, 3.0), -1.0, 3.0, 1.0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.law.name());
    CHECK(simpson([&](double x) { return c.law.density(x); }, c.lo, c.hi, 200000) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(simpson([&](double x) { return x * c.law.density(x); }, c.lo, c.hi, 200000) ==
          doctest::Approx(c.mean).epsilon(1e-7));
    CHECK(c.law.mean() == doctest::Approx(c.mean).epsilon(1e-12));
    // CDF is monotone, starts at 0 and ends at 1, and agrees with the integrated density.
    double prev = 0.0;
    for (int k = 0; k <= 100; ++k) {
      const double x = c.lo + (c.hi - c.lo) * k / 100.0;
      const double F = c.law.cdf(x);
      CHECK(F >= prev - 1e-15);
      prev = F;
    }
    CHECK(c.law.cdf(c.lo - 1.0) == 0.0);
    CHECK(c.law.cdf(c.hi + 1.0) == doctest::Approx(1.0));
    const double mid = c.lo + 0.3 * (std::min(c.hi, c.lo + 5.0) - c.lo);
    CHECK(c.law.cdf(mid) ==
          doctest::Approx(simpson([&](double x) { return c.law.density(x); }, c.lo, mid, 20000)).epsilon(1e-9));
    for (double p : {0.01, 0.25, 0.5, 0.9, 0.999}) CHECK(c.law.cdf(c.law.quantile(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  // The quarter-circle density is sqrt(4 - x^2) / pi on [0, 2]; the squared law
  // has cdf F(sqrt y) on [0, 4] and mean 1.
  const auto qc = ReferenceLaw::quarter_circle();
  CHECK(qc.density(1.0) == doctest::Approx(std::sqrt(3.0) / std::numbers::pi));
  const auto sq = ReferenceLaw::squared_quarter_circle();
  CHECK(sq.mean() == doctest::Approx(1.0));
  CHECK(sq.support().second == 4.0);
  for (double y : {0.2, 1.0, 2.5, 3.9}) CHECK(sq.cdf(y) == doctest::Approx(qc.cdf(std::sqrt(y))));
  CHECK(simpson([&](double y) { return y * sq.density(y); }, 1e-12, 4.0, 400000) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("sample batch") {
  SampleBatch b(3, Provenance{SamplerId::gibbs, 7, 10, 9});
  b.push_back(SquareMatrix::identity(3));
  CHECK_THROWS_AS(b.push_back(SquareMatrix::identity(2)), PreconditionError);
  CHECK(b.size() == 1);
  CHECK(to_string(SamplerId::dirichlet_rows) == "dirichlet_rows");
  CHECK(sampler_from_string("rejection") == SamplerId::rejection);
  CHECK_THROWS_AS(sampler_from_string("nope"), PreconditionError);
  CHECK(is_known_sampler(5));
  CHECK_FALSE(is_known_sampler(0));
  CHECK_FALSE(is_known_sampler(6));
}

}  // TEST_SUITE
