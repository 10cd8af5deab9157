#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include "chaosnet/classifier.hpp"
#include "chaosnet/errors.hpp"
#include "chaosnet/rng.hpp"

using namespace chaosnet;

namespace {

TtssParams some_params() {
  return TtssParams(GlsNeuron(MapVariant::SkewTent, 0.89), 0.499, 0.043);
}

} // namespace

TEST_CASE("fit with one row per class keeps the rows") {
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}});
  const ClassModel model = fit(features, {0, 1}, some_params());
  REQUIRE(model.num_classes() == 2);
  REQUIRE(model.num_features() == 2);
  CHECK(model.class_labels == std::vector<int>{0, 1});
  CHECK(model.mean_vectors(0, 0) == 0.2);
  CHECK(model.mean_vectors(0, 1) == 0.4);
  CHECK(model.mean_vectors(1, 0) == 0.6);
  CHECK(model.mean_vectors(1, 1) == 0.8);
}

TEST_CASE("fit averages the rows of a class") {
  const FeatureMatrix features =
      Matrix::from_rows({{0.2, 0.4}, {0.4, 0.6}, {1.0, 1.0}});
  const ClassModel model = fit(features, {0, 0, 1}, some_params());
  CHECK(model.mean_vectors(0, 0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(model.mean_vectors(0, 1) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("fit supports more than two classes") {
  const FeatureMatrix features =
      Matrix::from_rows({{0.1, 0.0}, {0.5, 0.5}, {0.9, 1.0}});
  const ClassModel model = fit(features, {3, 7, 9}, some_params());
  REQUIRE(model.num_classes() == 3);
  CHECK(model.class_labels == std::vector<int>{3, 7, 9});
}

TEST_CASE("labels out of order land in ascending class order") {
  const FeatureMatrix features = Matrix::from_rows({{0.9, 0.9}, {0.1, 0.1}});
  const ClassModel model = fit(features, {5, 2}, some_params());
  CHECK(model.class_labels == std::vector<int>{2, 5});
  CHECK(model.mean_vectors(0, 0) == 0.1);
  CHECK(model.mean_vectors(1, 0) == 0.9);
}

TEST_CASE("fit rejects bad input") {
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}});
  CHECK_THROWS_AS(fit(features, {0}, some_params()), DimensionMismatchError);
  CHECK_THROWS_AS(fit(features, {0, 0}, some_params()),
                  InsufficientClassCountError);
  CHECK_THROWS_AS(
      fit(Matrix::from_rows({{0.2, 1.4}, {0.6, 0.8}}), {0, 1}, some_params()),
      PreconditionError);
}

TEST_CASE("fit against a declared label set") {
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}});
  CHECK_THROWS_AS(fit(features, {0, 1}, some_params(), {0, 1, 2}),
                  EmptyClassError);
  CHECK_THROWS_AS(fit(features, {0, 3}, some_params(), {0, 1}),
                  PreconditionError);
  const ClassModel model = fit(features, {0, 1}, some_params(), {0, 1});
  CHECK(model.class_labels == std::vector<int>{0, 1});
}

TEST_CASE("cosine similarity examples") {
  const std::vector<double> a{0.1, 0.2};
  CHECK(cosine_similarity(a, a) == 1.0);
  CHECK(cosine_similarity(std::vector<double>{1, 0},
                          std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine_similarity(std::vector<double>{1, 1},
                          std::vector<double>{2, 2}) == 1.0);
  CHECK(cosine_similarity(std::vector<double>{0, 0},
                          std::vector<double>{1, 1}) == 0.0);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1},
                                    std::vector<double>{1, 2}),
                  DimensionMismatchError);
  CHECK_THROWS_AS(
      cosine_similarity(std::vector<double>{}, std::vector<double>{}),
      PreconditionError);
}

TEST_CASE("cosine similarity stays within [-1, 1]") {
  SplitMix64 rng(4242);
  for (int i = 0; i < 2000; ++i) {
    std::vector<double> f(5);
    std::vector<double> m(5);
    for (int j = 0; j < 5; ++j) {
      f[j] = rng.next_double() * 2.0 - 1.0;
      m[j] = rng.next_double() * 2.0 - 1.0;
    }
    const double c = cosine_similarity(f, m);
    REQUIRE(c >= -1.0);
    REQUIRE(c <= 1.0);
  }
}

TEST_CASE("prediction picks the most similar mean vector") {
  const FeatureMatrix features = Matrix::from_rows({{0.0, 0.5}, {0.5, 0.0}});
  const ClassModel model = fit(features, {1, 2}, some_params());
  const Prediction p = predict_row(model, std::vector<double>{0.0, 0.9});
  CHECK(p.label == 1);
  REQUIRE(p.similarities.size() == 2);
  CHECK(p.similarities[0] == 1.0);
  CHECK(p.similarities[1] == 0.0);
}

TEST_CASE("ties go to the smallest class label") {
  // Both mean vectors make the same angle with (1,1).
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.4, 0.2}});
  const ClassModel model = fit(features, {4, 9}, some_params());
  const Prediction p = predict_row(model, std::vector<double>{0.5, 0.5});
  CHECK(p.similarities[0] == p.similarities[1]);
  CHECK(p.label == 4);
}

TEST_CASE("a zero test vector yields the smallest label with zero similarity") {
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.4, 0.2}});
  const ClassModel model = fit(features, {4, 9}, some_params());
  const Prediction p = predict_row(model, std::vector<double>{0.0, 0.0});
  CHECK(p.label == 4);
  CHECK(p.similarities[0] == 0.0);
  CHECK(p.similarities[1] == 0.0);
}

TEST_CASE("labels are invariant under positive scaling of the test vector") {
  SplitMix64 rng(11);
  FeatureMatrix features(8, 4);
  std::vector<int> labels;
  for (std::size_t i = 0; i < 8; ++i) {
    labels.push_back(static_cast<int>(i % 3));
    for (std::size_t j = 0; j < 4; ++j) features(i, j) = rng.next_double();
  }
  const ClassModel model = fit(features, labels, some_params());
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> f(4);
    for (auto& v : f) v = rng.next_double();
    const double scale = 0.001 + rng.next_double() * 999.0;
    std::vector<double> scaled = f;
    for (auto& v : scaled) v *= scale;
    REQUIRE(predict_row(model, f).label == predict_row(model, scaled).label);
  }
}

TEST_CASE("one-row-per-class training rows come back with similarity one") {
  const FeatureMatrix features = Matrix::from_rows({{0.2, 0.4}, {0.8, 0.3}});
  const ClassModel model = fit(features, {0, 1}, some_params());
  const std::vector<Prediction> back = predict(model, features);
  CHECK(back[0].label == 0);
  CHECK(back[1].label == 1);
  CHECK(back[0].similarities[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(back[1].similarities[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("predict rejects mismatched feature width") {
  const ClassModel model =
      fit(Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}}), {0, 1}, some_params());
  CHECK_THROWS_AS(predict_row(model, std::vector<double>{0.5}),
                  DimensionMismatchError);
}

TEST_CASE("model round-trips through its text form") {
  SplitMix64 rng(555);
  FeatureMatrix features(6, 3);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 3; ++j) features(i, j) = rng.next_double();
  }
  const ClassModel model =
      fit(features, {0, 0, 1, 1, 2, 2},
          TtssParams(GlsNeuron(MapVariant::SkewBinary, 0.37), 0.25, 0.017, 5000));
  const ClassModel copy = model_from_string(model_to_string(model));
  CHECK(copy.class_labels == model.class_labels);
  CHECK(copy.mean_vectors == model.mean_vectors);
  CHECK(copy.params == model.params);

  // Bit-identical predictions, not merely close ones.
  std::vector<double> probe{0.1, 0.9, 0.4};
  const Prediction a = predict_row(model, probe);
  const Prediction b = predict_row(copy, probe);
  CHECK(a.label == b.label);
  CHECK(a.similarities == b.similarities);
}

TEST_CASE("model files survive a disk round-trip") {
  const ClassModel model =
      fit(Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}}), {0, 1}, some_params());
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "chaosnet_model_test.txt";
  save_model(model, path);
  const ClassModel loaded = load_model(path);
  std::filesystem::remove(path);
  CHECK(loaded.mean_vectors == model.mean_vectors);
  CHECK(loaded.class_labels == model.class_labels);
  CHECK(loaded.params == model.params);
}

TEST_CASE("malformed model text is rejected") {
  const ClassModel model =
      fit(Matrix::from_rows({{0.2, 0.4}, {0.6, 0.8}}), {0, 1}, some_params());
  const std::string good = model_to_string(model);
  CHECK_THROWS_AS(model_from_string(""), ParseError);
  CHECK_THROWS_AS(model_from_string("not-a-model\n"), ParseError);
  CHECK_THROWS_AS(model_from_string(good.substr(0, good.size() / 2)),
                  ParseError);
  std::string tampered = good;
  const auto pos = tampered.find("classes 2");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 9, "classes 3");
  CHECK_THROWS_AS(model_from_string(tampered), ParseError);
}
