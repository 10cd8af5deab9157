#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chaosnet/matrix.hpp"
#include "chaosnet/ttss.hpp"

namespace chaosnet {

/// Per-class mean representation vectors plus the extraction parameters
/// that produced them. class_labels is sorted ascending and defines both
/// the row order of mean_vectors and the tie-break order of predict.
struct ClassModel {
  std::vector<int> class_labels;
  Matrix mean_vectors; // k x n, row s is the mean vector of class_labels[s]
  TtssParams params;

  std::size_t num_classes() const { return class_labels.size(); }
  std::size_t num_features() const { return mean_vectors.cols(); }
};

struct Prediction {
  int label = 0;
  std::vector<double> similarities; // aligned with model.class_labels
};

/// Column means of the feature rows of each distinct label. Labels are
/// taken from `labels` (at least two distinct values required).
ClassModel fit(const FeatureMatrix& features, const std::vector<int>& labels,
               const TtssParams& params);

/// As above but against a declared label set: throws EmptyClassError if a
/// declared label has no rows, PreconditionError if a row's label is not
/// declared.
ClassModel fit(const FeatureMatrix& features, const std::vector<int>& labels,
               const TtssParams& params, const std::vector<int>& class_labels);

/// Standard cosine similarity, clamped into [-1,1] against rounding spill.
/// Either vector having zero norm yields 0 (no directional agreement).
double cosine_similarity(std::span<const double> f, std::span<const double> m);

/// Label of the most similar mean vector; ties go to the smallest class
/// label. similarities lists every class's cosine.
Prediction predict_row(const ClassModel& model, std::span<const double> f);

std::vector<Prediction> predict(const ClassModel& model,
                                const FeatureMatrix& features);

/// Model file: a small self-describing text document (see README for the
/// schema). Doubles are written in shortest round-trip form, so
/// save -> load -> predict is bit-identical to in-memory predict.
std::string model_to_string(const ClassModel& model);
ClassModel model_from_string(std::string_view text);

void save_model(const ClassModel& model, const std::filesystem::path& path);
ClassModel load_model(const std::filesystem::path& path);

} // namespace chaosnet
