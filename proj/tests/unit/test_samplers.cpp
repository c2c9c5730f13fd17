#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "birkhoff/core/checks.hpp"
#include "birkhoff/core/empirical.hpp"
#include "birkhoff/core/error.hpp"
#include "birkhoff/core/reference_law.hpp"
#include "birkhoff/samplers/exact.hpp"
#include "birkhoff/samplers/gibbs.hpp"
#include "birkhoff/samplers/models.hpp"
#include "birkhoff/statistics/distances.hpp"

using namespace birkhoff;

TEST_SUITE("samplers") {

TEST_CASE("feasible interval of a 2x2 block") {
  // Constraints a' >= 0, a' >= a - d, a' <= a + b, a' <= a + c.
  auto oracle = [](double a, double b, double c, double d) {
    return std::pair{std::max({0.0, a - d}), std::min(a + b, a + c)};
  };
  const auto i1 = block_interval(0.5, 0.0, 0.0, 0.5);
  CHECK(i1.lo == 0.0);
  CHECK(i1.hi == 0.5);
  const auto i2 = block_interval(0.2, 0.3, 0.4, 0.1);
  CHECK(i2.lo == doctest::Approx(0.1));
  CHECK(i2.hi == doctest::Approx(0.5));
  RandomStream s(4, 0);
  for (int k = 0; k < 1000; ++k) {
    const double a = s.uniform(), b = s.uniform(), c = s.uniform(), d = s.uniform();
    const auto got = block_interval(a, b, c, d);
    const auto [lo, hi] = oracle(a, b, c, d);
    CHECK(got.lo == lo);
    CHECK(got.hi == doctest::Approx(hi));
  }
}

TEST_CASE("gibbs moves preserve margins and nonnegativity") {
  const std::size_t n = 50;
  auto cfg = GibbsConfig::defaults(n);
  GibbsChain chain(cfg, RandomStream(8, 0));
  chain.advance(1'000'000);
  CHECK(chain.moves() == 1'000'000);
  const auto r = check_doubly_stochastic(chain.state(), 1e-9);
  CHECK(r.ok);
  CHECK(*std::min_element(chain.state().entries().begin(), chain.state().entries().end()) >= 0.0);
}

TEST_CASE("gibbs_step") {
  SUBCASE("returns the applied move") {
    RandomStream s(2, 0);
    const auto m = SquareMatrix::barycenter(4);
    const auto step = gibbs_step(m, s);
    const auto& mv = step.move;
    CHECK(mv.row_lo < mv.row_hi);
    CHECK(mv.col_lo < mv.col_hi);
    CHECK(mv.previous == doctest::Approx(0.25));
    CHECK(step.matrix(mv.row_lo, mv.col_lo) == mv.value);
    CHECK(mv.value >= mv.interval.lo);
    CHECK(mv.value <= mv.interval.hi);
    CHECK(check_doubly_stochastic(step.matrix, 1e-12).ok);
  }
  SUBCASE("n=2: one step is exactly uniform on the segment") {
    RandomStream s(3, 0);
    std::vector<double> x;
    for (int k = 0; k < 100000; ++k) {
      const double a = s.uniform();
      const SquareMatrix m(2, std::vector<double>{a, 1 - a, 1 - a, a});
      const auto step = gibbs_step(m, s);
      CHECK(step.move.interval.lo == 0.0);
      CHECK(step.move.interval.hi == doctest::Approx(1.0));
      x.push_back(step.matrix(0, 0));
    }
    CHECK(ks_distance(EmpiricalDistribution(x), ReferenceLaw::uniform(0, 1)) < 0.01);
  }
  SUBCASE("preconditions") {
    RandomStream s(3, 0);
    CHECK_THROWS_AS(gibbs_step(SquareMatrix::identity(1), s), PreconditionError);
    auto off = SquareMatrix::barycenter(3);
    off(0, 0) += 1e-4;
    CHECK_THROWS_AS(gibbs_step(off, s), PreconditionError);
  }
  SUBCASE("corrupted state is detected") {
    // A block whose interval is empty: a - d > a + min(b, c).
    SquareMatrix m(2, std::vector<double>{0.5, 0.2, 0.2, -0.5});
    RandomStream s(1, 0);
    CHECK_THROWS_AS(apply_gibbs_move(m, s), CorruptedStateError);
  }
}

TEST_CASE("gibbs_chain contracts") {
  SUBCASE("n=2 is exactly uniform after one move") {
    GibbsConfig cfg{2, 1, 1, 20};
    const auto batch = gibbs_chain(cfg, 100000, 12);
    std::vector<double> x;
    for (const auto& m : batch) x.push_back(m(0, 0));
    CHECK(ks_distance(EmpiricalDistribution(x), ReferenceLaw::uniform(0, 1)) < 0.01);
  }
  SUBCASE("first sample equals one step from the start") {
    GibbsConfig cfg{3, 0, 1, 9};
    const auto id = SquareMatrix::identity(3);
    const auto batch = gibbs_chain(cfg, 1, 21, 0, id);
    RandomStream s(21, 0);
    const auto step = gibbs_step(id, s);
    CHECK(batch[0] == step.matrix);
  }
  SUBCASE("provenance and reproducibility") {
    const auto cfg = GibbsConfig::defaults(5);
    const auto a = gibbs_chain(cfg, 20, 99);
    const auto b = gibbs_chain(cfg, 20, 99);
    CHECK(a == b);
    CHECK(a.provenance().sampler == SamplerId::gibbs);
    CHECK(a.provenance().burn_in == cfg.burn_in);
    CHECK(a.provenance().spacing == cfg.spacing);
    CHECK_FALSE(a == gibbs_chain(cfg, 20, 100));
  }
  SUBCASE("worker count does not change the output") {
    const auto cfg = GibbsConfig::defaults(6);
    const auto one = gibbs_batch(cfg, 37, 5, ChainPlan{4, 1});
    const auto four = gibbs_batch(cfg, 37, 5, ChainPlan{4, 4});
    CHECK(one == four);
    CHECK(one.size() == 37);
  }
  SUBCASE("n=1") {
    const auto batch = gibbs_chain(GibbsConfig::defaults(1), 3, 1);
    REQUIRE(batch.size() == 3);
    CHECK(batch[2](0, 0) == 1.0);
  }
  SUBCASE("defaults") {
    const auto cfg = GibbsConfig::defaults(10);
    CHECK(cfg.burn_in == 10u * 100u * 3u);
    CHECK(cfg.repair_period == 1000u);
    CHECK_THROWS_AS((GibbsConfig{3, 0, 0, 1}.validate()), PreconditionError);
  }
}

TEST_CASE("rejection_exact") {
  SUBCASE("n=1 always accepts [1]") {
    const auto r = rejection_exact(1, 5, 1);
    CHECK(r.batch.size() == 5);
    CHECK(r.batch[0](0, 0) == 1.0);
    CHECK(r.acceptance_rate() == 1.0);
  }
  SUBCASE("n=2 accepts every proposal") {
    const auto r = rejection_exact(2, 1000, 1);
    CHECK(r.proposals == 1000);
    CHECK(r.acceptance_rate() == 1.0);
    for (const auto& m : r.batch) CHECK(check_doubly_stochastic(m, 1e-12).ok);
  }
  SUBCASE("n=3 acceptance estimates the volume 1/8") {
    const auto r = rejection_exact(3, 20000, 7, ChainPlan{4, 0});
    const double p = r.acceptance_rate();
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(r.proposals));
    CHECK(std::abs(p - 0.125) < 3 * se);
    for (const auto& m : r.batch) CHECK(check_doubly_stochastic(m, 1e-12).ok);
  }
  SUBCASE("proposal cap") {
    RejectionOptions opt;
    opt.proposal_cap = 100;
    try {
      rejection_exact(4, 1000, 1, {}, opt);
      FAIL("expected ProposalCapError");
    } catch (const ProposalCapError& e) {
      CHECK(e.cap() == 100);
      CHECK(e.accepted() < 1000);
    }
  }
  SUBCASE("large n needs an explicit opt-in") {
    CHECK_THROWS_AS(rejection_exact(6, 1, 1), PreconditionError);
  }
  SUBCASE("deterministic across workers") {
    const auto a = rejection_exact(3, 500, 3, ChainPlan{3, 1});
    const auto b = rejection_exact(3, 500, 3, ChainPlan{3, 3});
    CHECK(a.batch == b.batch);
    CHECK(a.proposals == b.proposals);
  }
}

TEST_CASE("vertex_mixture") {
  SUBCASE("n=2 gives Beta(1,1)") {
    const auto batch = vertex_mixture(2, 50000, 5);
    std::vector<double> x;
    for (const auto& m : batch) x.push_back(m(0, 0));
    CHECK(ks_distance(EmpiricalDistribution(x), ReferenceLaw::beta(1, 1)) < 0.01);
  }
  SUBCASE("n=3 mean and variance") {
    const auto batch = vertex_mixture(3, 100000, 6);
    std::vector<double> x;
    for (const auto& m : batch) {
      CHECK(check_doubly_stochastic(m, 1e-12).ok);
      x.push_back(m(0, 0));
    }
    const EmpiricalDistribution e(x);
    CHECK(std::abs(e.mean() - 1.0 / 3.0) < 4 * std::sqrt(e.variance() / 1e5));
    CHECK(e.variance() == doctest::Approx(2.0 / 63.0).epsilon(0.02));
  }
  SUBCASE("size limits") {
    CHECK_THROWS_AS(vertex_mixture(kVertexMixtureMaxN + 1, 1, 1), PreconditionError);
    CHECK(vertex_mixture(1, 2, 1)[0](0, 0) == 1.0);
  }
}

TEST_CASE("iid exponential and dirichlet rows") {
  const auto m = iid_exponential_matrix(100, 3);
  const EmpiricalDistribution e(std::vector<double>(m.entries().begin(), m.entries().end()));
  CHECK(std::abs(e.mean() - 1.0) < 4 * 0.01);
  double second = 0;
  for (double v : m.entries()) second += v * v;
  CHECK(second / 1e4 == doctest::Approx(2.0).epsilon(0.1));
  CHECK(e.min() >= 0.0);

  const auto d = dirichlet_row_matrix(100, 4);
  for (double s : row_sums(d)) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

  // Tail P(n Y > (2+eps) log n) = (1 - (2+eps) log n / n)^(n-1) for a Beta(1, n-1) entry.
  const std::size_t n = 100;
  const double thr = 2.5 * std::log(100.0) / 100.0;
  const double p = std::pow(1.0 - thr, n - 1);
  RandomStream s(5, 0);
  std::size_t hits = 0, total = 0;
  double mean = 0;
  for (int k = 0; k < 400; ++k) {
    const auto row_matrix = dirichlet_row_matrix(n, s);
    for (double v : row_matrix.entries()) {
      hits += v > thr;
      mean += v;
      ++total;
    }
  }
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(total));
  // Entries within a row are dependent; allow a 2x inflated error.
  CHECK(std::abs(static_cast<double>(hits) / total - p) < 6 * se);
  CHECK(mean / total == doctest::Approx(0.01).epsilon(1e-9));

  const auto ib = iid_exponential_batch(4, 3, 9);
  CHECK(ib.provenance().sampler == SamplerId::iid_exponential);
  CHECK(dirichlet_row_batch(4, 3, 9).provenance().sampler == SamplerId::dirichlet_rows);
}

}  // TEST_SUITE
