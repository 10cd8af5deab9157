#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>

#include "chaosnet/errors.hpp"
#include "chaosnet/gls.hpp"
#include "chaosnet/matrix.hpp"
#include "chaosnet/rng.hpp"
#include "chaosnet/ttss.hpp"

using namespace chaosnet;

namespace {

TtssParams default_params() {
  return TtssParams(GlsNeuron(MapVariant::SkewTent, 0.89), 0.499, 0.043);
}

// Independent oracle: materialize the trajectory with iterate, find the
// first index inside the neighborhood, then count exceedances before it.
// Grows the horizon geometrically so short firings stay cheap.
FiringResult oracle_firing(const TtssParams& params, double stimulus) {
  std::size_t horizon = 64;
  while (true) {
    if (horizon > params.max_iterations) {
      horizon = static_cast<std::size_t>(params.max_iterations);
    }
    const Trajectory t = iterate(params.neuron, params.q, horizon);
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (std::abs(t[i] - stimulus) < params.epsilon) {
        std::uint64_t h = 0;
        for (std::size_t j = 0; j < i; ++j) {
          if (t[j] > params.neuron.b()) ++h;
        }
        const auto n = static_cast<std::uint64_t>(i);
        return {n, h,
                n == 0 ? 0.0 : static_cast<double>(h) / static_cast<double>(n)};
      }
    }
    if (horizon == params.max_iterations) {
      throw NonConvergenceError("oracle: no firing within the cap");
    }
    horizon *= 2;
  }
}

} // namespace

TEST_CASE("stimulus equal to q fires immediately") {
  const TtssParams params(GlsNeuron(MapVariant::SkewTent, 0.4), 0.3, 0.043);
  const FiringResult r = firing_time(params, 0.3);
  CHECK(r.n == 0);
  CHECK(r.h == 0);
  CHECK(r.p == 0.0);
}

TEST_CASE("firing at the default operating point, stimulus 0.9") {
  const FiringResult r = firing_time(default_params(), 0.9);
  CHECK(r.n == 5);
  CHECK(r.h == 0);
  CHECK(r.p == 0.0);
}

TEST_CASE("firing with b = 0.5, one exceedance") {
  const TtssParams params(GlsNeuron(MapVariant::SkewTent, 0.5), 0.499, 0.05);
  const FiringResult r = firing_time(params, 0.1);
  CHECK(r.n == 6);
  CHECK(r.h == 1);
  CHECK(r.p == 1.0 / 6.0);
}

TEST_CASE("firing at the extremes of the stimulus range") {
  // Frozen from an independent brute-force run at the default operating
  // point: stimulus 0 takes the longest of any stimulus (N = 84).
  const FiringResult at_zero = firing_time(default_params(), 0.0);
  CHECK(at_zero.n == 84);
  CHECK(at_zero.h == 8);
  CHECK(at_zero.p == 8.0 / 84.0);
  const FiringResult at_one = firing_time(default_params(), 1.0);
  CHECK(at_one.n == 6);
  CHECK(at_one.h == 1);
  CHECK(at_one.p == 1.0 / 6.0);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(firing_time(default_params(), -0.01), PreconditionError);
  CHECK_THROWS_AS(firing_time(default_params(), 1.01), PreconditionError);
  CHECK_THROWS_AS(TtssParams(GlsNeuron(), 0.5, 0.0), PreconditionError);
  CHECK_THROWS_AS(TtssParams(GlsNeuron(), -0.1, 0.05), PreconditionError);
  CHECK_THROWS_AS(TtssParams(GlsNeuron(), 0.5, 0.05, 0), PreconditionError);
}

TEST_CASE("non-convergence raises within the cap") {
  // q = 0 is a fixed point, so a stimulus away from 0 is never reached.
  const TtssParams params(GlsNeuron(MapVariant::SkewTent, 0.5), 0.0, 0.01, 1000);
  CHECK_THROWS_AS(firing_time(params, 0.9), NonConvergenceError);
}

TEST_CASE("oracle equivalence over random parameter tuples") {
  SplitMix64 rng(99);
  int checked = 0;
  while (checked < 1200) {
    const double b = 0.01 + rng.next_double() * 0.98;
    const double q = rng.next_double();
    const double eps = 0.01 + rng.next_double() * 0.09;
    const double stimulus = rng.next_double();
    const MapVariant variant =
        rng.next() % 2 == 0 ? MapVariant::SkewTent : MapVariant::SkewBinary;
    const TtssParams params(GlsNeuron(variant, b), q, eps, 200000);
    FiringResult expected{};
    FiringResult actual{};
    bool oracle_diverged = false;
    bool actual_diverged = false;
    try {
      expected = oracle_firing(params, stimulus);
    } catch (const NonConvergenceError&) {
      oracle_diverged = true;
    }
    try {
      actual = firing_time(params, stimulus);
    } catch (const NonConvergenceError&) {
      actual_diverged = true;
    }
    CAPTURE(b);
    CAPTURE(q);
    CAPTURE(eps);
    CAPTURE(stimulus);
    REQUIRE(oracle_diverged == actual_diverged);
    if (!oracle_diverged) {
      REQUIRE(actual.n == expected.n);
      REQUIRE(actual.h == expected.h);
      REQUIRE(actual.p == expected.p);
      ++checked;
    }
  }
}

TEST_CASE("stop condition is sound on replayed trajectories") {
  SplitMix64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const double b = 0.01 + rng.next_double() * 0.98;
    const double q = rng.next_double();
    const double eps = 0.01 + rng.next_double() * 0.09;
    const double stimulus = rng.next_double();
    const TtssParams params(GlsNeuron(MapVariant::SkewTent, b), q, eps, 200000);
    FiringResult r{};
    try {
      r = firing_time(params, stimulus);
    } catch (const NonConvergenceError&) {
      continue;
    }
    const Trajectory t =
        iterate(params.neuron, q, static_cast<std::size_t>(r.n));
    CAPTURE(b);
    CAPTURE(q);
    CAPTURE(eps);
    CAPTURE(stimulus);
    REQUIRE(std::abs(t.back() - stimulus) < eps);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
      REQUIRE(std::abs(t[k] - stimulus) >= eps);
    }
  }
}

TEST_CASE("h never exceeds n and p stays in range") {
  SplitMix64 rng(333);
  for (int i = 0; i < 10000; ++i) {
    const double b = 0.01 + rng.next_double() * 0.98;
    const TtssParams params(GlsNeuron(MapVariant::SkewTent, b),
                            rng.next_double(), 0.01 + rng.next_double() * 0.09,
                            200000);
    try {
      const FiringResult r = firing_time(params, rng.next_double());
      REQUIRE(r.h <= r.n);
      REQUIRE(r.p >= 0.0);
      REQUIRE(r.p <= 1.0);
    } catch (const NonConvergenceError&) {
    }
  }
}

TEST_CASE("extract_features matches cellwise firing") {
  const Matrix data = Matrix::from_rows({{0.1, 0.5, 0.9}, {0.0, 0.25, 1.0}});
  const TtssParams params = default_params();
  const FeatureMatrix features = extract_features(data, params);
  REQUIRE(features.rows() == 2);
  REQUIRE(features.cols() == 3);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(features(i, j) == firing_time(params, data(i, j)).p);
    }
  }
}

TEST_CASE("extraction examples") {
  const TtssParams immediate(GlsNeuron(MapVariant::SkewTent, 0.5), 0.3, 0.043);
  const FeatureMatrix one = extract_features(Matrix::from_rows({{0.3}}), immediate);
  CHECK(one(0, 0) == 0.0);

  const FeatureMatrix two =
      extract_features(Matrix::from_rows({{0.9}, {0.9}}), default_params());
  CHECK(two(0, 0) == 0.0);
  CHECK(two(1, 0) == 0.0);
}

TEST_CASE("multithreaded extraction equals sequential extraction") {
  SplitMix64 rng(17);
  Matrix data(37, 5);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      data(i, j) = rng.next_double();
    }
  }
  const TtssParams params = default_params();
  const FeatureMatrix sequential = extract_features(data, params, 1);
  for (std::size_t threads : {2, 3, 8, 64}) {
    CAPTURE(threads);
    CHECK(extract_features(data, params, threads) == sequential);
  }
}

TEST_CASE("extraction rejects out-of-range cells") {
  CHECK_THROWS_AS(extract_features(Matrix::from_rows({{1.5}}), default_params()),
                  PreconditionError);
}

TEST_CASE("non-convergence in a matrix names the cell") {
  // Row 1, column 2 holds the unreachable stimulus (q = 0 never moves).
  const TtssParams params(GlsNeuron(MapVariant::SkewTent, 0.5), 0.0, 0.01, 100);
  const Matrix data = Matrix::from_rows({{0.0, 0.0, 0.0}, {0.0, 0.0, 0.9}});
  try {
    extract_features(data, params);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    REQUIRE(e.row().has_value());
    REQUIRE(e.col().has_value());
    CHECK(*e.row() == 1);
    CHECK(*e.col() == 2);
  }
  // The same cell must be reported no matter how many workers run.
  try {
    extract_features(data, params, 8);
    FAIL("expected NonConvergenceError");
  } catch (const NonConvergenceError& e) {
    CHECK(*e.row() == 1);
    CHECK(*e.col() == 2);
  }
}
