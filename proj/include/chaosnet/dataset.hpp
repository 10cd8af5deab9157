#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chaosnet/matrix.hpp"

namespace chaosnet {

/// Per-column min/max recorded by normalize, reusable on later data.
struct ColumnStats {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const ColumnStats&, const ColumnStats&) = default;
};

/// Tabular dataset: raw or normalized feature matrix plus integer labels.
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> feature_names;
  std::string label_name = "label";
  std::optional<std::vector<ColumnStats>> normalization;

  std::size_t rows() const { return features.rows(); }
  std::size_t cols() const { return features.cols(); }

  /// Distinct labels, ascending.
  std::vector<int> distinct_labels() const;
  /// Row indices of one label, in dataset order.
  std::vector<std::size_t> rows_of_label(int label) const;
};

/// CSV: comma delimiter, first row header, decimal point, no quoting.
/// The label column may be picked by header name or 0-based position;
/// remaining columns become features in file order. ParseError reports
/// 1-based file line and column.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column);
Dataset load_csv(const std::filesystem::path& path, std::size_t label_index);
/// Label = last column.
Dataset load_csv(const std::filesystem::path& path);
/// All columns are features; labels default to 0 (placeholders).
Dataset load_csv_unlabeled(const std::filesystem::path& path);

/// Features in column order followed by the label column. Doubles are
/// written in shortest round-trip form, so a load of the result
/// reproduces every value bit-exactly.
std::string dataset_to_csv(const Dataset& dataset, bool include_labels = true);
void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              bool include_labels = true);

/// Per-column min-max scaling to [0,1]; constant columns map to zeros.
/// The per-column (min,max) of the input is recorded on the result.
Dataset normalize(const Dataset& dataset);

/// Scales with previously recorded stats (train-only mode); values
/// landing outside [0,1] are clamped so the map domain is respected.
Dataset apply_normalization(const Dataset& dataset,
                            const std::vector<ColumnStats>& stats);

/// Two balanced classes with disjoint per-feature supports:
/// class 0 uniform on [0, 0.5 - separation/2], class 1 uniform on
/// [0.5 + separation/2, 1]. Rows are class 0 first, then class 1;
/// feature names f1..fn.
Dataset generate_synthetic(std::size_t n_per_class, std::size_t n_features,
                           double separation, std::uint64_t seed);

/// Column subset (0-based), preserving the given order.
Dataset select_columns(const Dataset& dataset, std::span<const std::size_t> columns);

/// Row subset (0-based), preserving the given order.
Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows);

} // namespace chaosnet
