#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "acopt/replay_buffer.hpp"

using namespace acopt;

namespace {
Design scalar_design(double x) { return Design{std::vector<double>{x}}; }
}  // namespace

TEST_SUITE("replay_buffer") {

TEST_CASE("best tracks the maximal score") {
  ReplayBuffer buf;
  buf.store({scalar_design(0.1), 1.0});
  buf.store({scalar_design(0.2), 0.5});
  CHECK(buf.best().score == 1.0);
  CHECK(std::get<std::vector<double>>(buf.best().design)[0] == 0.1);
}

TEST_CASE("ties keep the earlier entry") {
  ReplayBuffer buf;
  buf.store({scalar_design(0.1), 0.7});
  buf.store({scalar_design(0.2), 0.7});
  CHECK(std::get<std::vector<double>>(buf.best().design)[0] == 0.1);
}

TEST_CASE("eviction at capacity recomputes the best over retained entries") {
  ReplayBuffer buf(2);
  buf.store({scalar_design(0.1), 1.0});
  buf.store({scalar_design(0.2), 0.5});
  buf.store({scalar_design(0.3), 0.7});
  CHECK(buf.size() == 2);
  CHECK(buf.best().score == 0.7);
  CHECK(std::get<std::vector<double>>(buf[0].design)[0] == 0.2);
}

TEST_CASE("eviction tie-break also favors the earliest retained entry") {
  ReplayBuffer buf(3);
  buf.store({scalar_design(0.0), 0.9});
  buf.store({scalar_design(0.1), 0.4});
  buf.store({scalar_design(0.2), 0.4});
  buf.store({scalar_design(0.3), 0.2});  // evicts the 0.9 best
  CHECK(buf.best().score == 0.4);
  CHECK(std::get<std::vector<double>>(buf.best().design)[0] == 0.1);
}

TEST_CASE("non-finite scores are rejected") {
  ReplayBuffer buf;
  CHECK_THROWS_AS(buf.store({scalar_design(0.0), std::numeric_limits<double>::quiet_NaN()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(buf.store({scalar_design(0.0), std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK(buf.empty());
}

TEST_CASE("sampling from a single entry returns copies of it") {
  ReplayBuffer buf;
  buf.store({scalar_design(0.5), 2.0});
  std::mt19937_64 rng(1);
  const auto batch = buf.sample(4, rng);
  REQUIRE(batch.size() == 4);
  for (const auto& sd : batch) CHECK(sd.score == 2.0);
}

TEST_CASE("sampling an empty buffer throws") {
  ReplayBuffer buf;
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(buf.sample(1, rng), std::invalid_argument);
}

TEST_CASE("fixed seed reproduces the exact sample sequence") {
  ReplayBuffer buf;
  for (int i = 0; i < 10; ++i) buf.store({scalar_design(i * 0.1), static_cast<double>(i)});
  std::mt19937_64 rng_a(42);
  std::mt19937_64 rng_b(42);
  const auto a = buf.sample(64, rng_a);
  const auto b = buf.sample(64, rng_b);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].score == b[i].score);
}

TEST_CASE("uniformity: chi-square over 1e5 draws from 10 entries") {
  ReplayBuffer buf;
  for (int i = 0; i < 10; ++i) buf.store({scalar_design(i * 0.1), static_cast<double>(i)});
  std::mt19937_64 rng(7);
  const int draws = 100000;
  std::vector<int> counts(10, 0);
  for (int k = 0; k < draws; ++k) {
    const auto batch = buf.sample(1, rng);
    counts[static_cast<std::size_t>(std::lround(batch[0].score))] += 1;
  }
  const double expected = draws / 10.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square with 9 dof, upper 1% critical value
  CHECK(chi2 < 21.666);
}

}  // TEST_SUITE
