#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chaosnet/errors.hpp"
#include "chaosnet/gls.hpp"
#include "chaosnet/rng.hpp"

using namespace chaosnet;

TEST_CASE("skew-tent step") {
  CHECK(skew_tent_step(0.25, 0.5) == 0.5);
  CHECK(skew_tent_step(0.5, 0.5) == 1.0);
  CHECK(skew_tent_step(1.0, 0.5) == 0.0);
}

TEST_CASE("skew-binary step") {
  CHECK(skew_binary_step(0.25, 0.5) == 0.5);
  CHECK(skew_binary_step(0.5, 0.5) == 0.0);
  CHECK(skew_binary_step(0.75, 0.5) == 0.5);
}

TEST_CASE("domain violations are rejected") {
  CHECK_THROWS_AS(skew_tent_step(-0.1, 0.5), PreconditionError);
  CHECK_THROWS_AS(skew_tent_step(1.1, 0.5), PreconditionError);
  CHECK_THROWS_AS(skew_tent_step(0.5, 0.0), PreconditionError);
  CHECK_THROWS_AS(skew_tent_step(0.5, 1.0), PreconditionError);
  CHECK_THROWS_AS(skew_binary_step(2.0, 0.5), PreconditionError);
  CHECK_THROWS_AS(skew_binary_step(0.5, -0.2), PreconditionError);
  CHECK_THROWS_AS(GlsNeuron(MapVariant::SkewTent, 0.0), PreconditionError);
  CHECK_THROWS_AS(GlsNeuron(MapVariant::SkewBinary, 1.0), PreconditionError);
}

TEST_CASE("boundary values stay inside the closed domain") {
  for (double b : {0.01, 0.3, 0.5, 0.89, 0.99}) {
    CAPTURE(b);
    CHECK(skew_tent_step(0.0, b) == 0.0);
    CHECK(skew_binary_step(0.0, b) == 0.0);
    CHECK(skew_tent_step(b, b) == 1.0);
    CHECK(skew_tent_step(1.0, b) == 0.0);
    CHECK(skew_binary_step(1.0, b) == 1.0);
  }
}

TEST_CASE("iterate chains the map") {
  const Trajectory t = iterate(GlsNeuron(MapVariant::SkewTent, 0.5), 0.25, 2);
  REQUIRE(t.size() == 3);
  CHECK(t[0] == 0.25);
  CHECK(t[1] == 0.5);
  CHECK(t[2] == 1.0);
}

TEST_CASE("iterate with zero steps returns only the start") {
  const Trajectory t = iterate(GlsNeuron(), 0.3, 0);
  REQUIRE(t.size() == 1);
  CHECK(t[0] == 0.3);
}

TEST_CASE("trajectory from the default operating point") {
  // Frozen against an independent high-precision evaluation of five
  // applications of the skew-tent map with b = 0.89 starting at 0.499
  // (all five stay on the rising branch, so each step divides by b).
  const Trajectory t = iterate(GlsNeuron(MapVariant::SkewTent, 0.89), 0.499, 5);
  const double expected[] = {0.499,
                             0.5606741573033708,
                             0.6299709632622144,
                             0.7078325429912521,
                             0.7953174640351147,
                             0.8936151281293424};
  REQUIRE(t.size() == 6);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CAPTURE(i);
    CHECK(t[i] == doctest::Approx(expected[i]).epsilon(1e-12));
  }
}

TEST_CASE("range closure over random inputs") {
  SplitMix64 rng(2024);
  for (int i = 0; i < 10000; ++i) {
    const double x = rng.next_double();
    double b = rng.next_double();
    if (!(b > 0.0 && b < 1.0)) b = 0.5;
    const double tent = skew_tent_step(x, b);
    const double binary = skew_binary_step(x, b);
    CAPTURE(x);
    CAPTURE(b);
    REQUIRE(tent >= 0.0);
    REQUIRE(tent <= 1.0);
    REQUIRE(binary >= 0.0);
    REQUIRE(binary <= 1.0);
  }
}

TEST_CASE("iterate keeps every value in range and is deterministic") {
  const GlsNeuron neuron(MapVariant::SkewBinary, 0.37);
  const Trajectory t = iterate(neuron, 0.21, 500);
  for (double x : t) {
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
  }
  CHECK(t == iterate(neuron, 0.21, 500));
}

TEST_CASE("zero is a fixed point of both maps") {
  for (double b : {0.1, 0.5, 0.89}) {
    const Trajectory tent = iterate(GlsNeuron(MapVariant::SkewTent, b), 0.0, 10);
    const Trajectory bin = iterate(GlsNeuron(MapVariant::SkewBinary, b), 0.0, 10);
    for (double x : tent) CHECK(x == 0.0);
    for (double x : bin) CHECK(x == 0.0);
  }
}

TEST_CASE("map variant names round-trip") {
  CHECK(to_string(MapVariant::SkewTent) == "skew-tent");
  CHECK(to_string(MapVariant::SkewBinary) == "skew-binary");
  CHECK(map_variant_from_string("skew-tent") == MapVariant::SkewTent);
  CHECK(map_variant_from_string("skew-binary") == MapVariant::SkewBinary);
  CHECK_THROWS_AS(map_variant_from_string("tent"), PreconditionError);
}
