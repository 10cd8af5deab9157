#include "chaosnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <utility>

#include "chaosnet/errors.hpp"
#include "chaosnet/rng.hpp"
#include "chaosnet/textio.hpp"

namespace chaosnet {

namespace {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows; // data rows, header excluded
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    const std::size_t len =
        comma == std::string::npos ? std::string::npos : comma - start;
    fields.emplace_back(trim(std::string_view(line).substr(start, len)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  CsvTable table;
  std::size_t line_no = 0; // 1-based file line of the field being parsed
  std::size_t start = 0;
  bool have_header = false;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = end == std::string::npos ? text.substr(start)
                                                : text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      if (end == std::string::npos) break;
      start = end + 1;
      continue;
    }
    auto fields = split_csv_line(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != table.header.size()) {
        throw ParseError("expected " + std::to_string(table.header.size()) +
                             " fields but found " + std::to_string(fields.size()),
                         line_no, fields.size());
      }
      table.rows.push_back(std::move(fields));
    }
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (!have_header) throw ParseError("file has no header row", 1, 1);
  return table;
}

Dataset table_to_dataset(const CsvTable& table, std::size_t label_index,
                         bool has_labels) {
  const std::size_t n_cols = table.header.size();
  if (has_labels && label_index >= n_cols) {
    throw PreconditionError("label column index " + std::to_string(label_index) +
                            " out of range for " + std::to_string(n_cols) +
                            " columns");
  }
  Dataset dataset;
  for (std::size_t c = 0; c < n_cols; ++c) {
    if (has_labels && c == label_index) continue;
    dataset.feature_names.push_back(table.header[c]);
  }
  if (has_labels) dataset.label_name = table.header[label_index];

  const std::size_t n_features = dataset.feature_names.size();
  std::vector<double> values;
  values.reserve(table.rows.size() * n_features);
  dataset.labels.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& fields = table.rows[r];
    const std::size_t file_line = r + 2; // header is line 1
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (has_labels && c == label_index) {
        const auto label = parse_label(fields[c]);
        if (!label || *label < std::numeric_limits<int>::min() ||
            *label > std::numeric_limits<int>::max()) {
          throw ParseError("cannot parse \"" + fields[c] +
                               "\" as an integer label",
                           file_line, c + 1);
        }
        dataset.labels.push_back(static_cast<int>(*label));
        continue;
      }
      const auto value = parse_double(fields[c]);
      if (!value || !std::isfinite(*value)) {
        throw ParseError("cannot parse \"" + fields[c] + "\" as a real number",
                         file_line, c + 1);
      }
      values.push_back(*value);
    }
  }
  if (!has_labels) dataset.labels.assign(table.rows.size(), 0);
  dataset.features = Matrix(table.rows.size(), n_features, std::move(values));
  return dataset;
}

} // namespace

std::vector<int> Dataset::distinct_labels() const {
  std::set<int> seen(labels.begin(), labels.end());
  return {seen.begin(), seen.end()};
}

std::vector<std::size_t> Dataset::rows_of_label(int label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) out.push_back(i);
  }
  return out;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  CsvTable table = read_csv_table(path);
  auto it = std::find(table.header.begin(), table.header.end(), label_column);
  if (it == table.header.end()) {
    throw MissingLabelColumnError("label column \"" + label_column +
                                  "\" not found in header");
  }
  return table_to_dataset(table, static_cast<std::size_t>(it - table.header.begin()),
                          true);
}

Dataset load_csv(const std::filesystem::path& path, std::size_t label_index) {
  CsvTable table = read_csv_table(path);
  return table_to_dataset(table, label_index, true);
}

Dataset load_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv_table(path);
  return table_to_dataset(table, table.header.size() - 1, true);
}

Dataset load_csv_unlabeled(const std::filesystem::path& path) {
  CsvTable table = read_csv_table(path);
  return table_to_dataset(table, 0, false);
}

std::string dataset_to_csv(const Dataset& dataset, bool include_labels) {
  if (dataset.labels.size() != dataset.rows()) {
    throw DimensionMismatchError("dataset has " + std::to_string(dataset.rows()) +
                                 " rows but " + std::to_string(dataset.labels.size()) +
                                 " labels");
  }
  std::string out;
  for (std::size_t c = 0; c < dataset.cols(); ++c) {
    if (c > 0) out += ',';
    out += c < dataset.feature_names.size() ? dataset.feature_names[c]
                                            : "f" + std::to_string(c + 1);
  }
  if (include_labels) {
    if (dataset.cols() > 0) out += ',';
    out += dataset.label_name;
  }
  out += '\n';
  for (std::size_t r = 0; r < dataset.rows(); ++r) {
    for (std::size_t c = 0; c < dataset.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(dataset.features(r, c));
    }
    if (include_labels) {
      if (dataset.cols() > 0) out += ',';
      out += std::to_string(dataset.labels[r]);
    }
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& dataset, const std::filesystem::path& path,
              bool include_labels) {
  write_file_atomic(path, dataset_to_csv(dataset, include_labels));
}

Dataset normalize(const Dataset& dataset) {
  Dataset out = dataset;
  std::vector<ColumnStats> stats(dataset.cols());
  for (std::size_t c = 0; c < dataset.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
      const double v = dataset.features(r, c);
      if (!std::isfinite(v)) {
        throw PreconditionError("non-finite value at row " + std::to_string(r) +
                                ", column " + std::to_string(c));
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (dataset.rows() == 0) lo = hi = 0.0;
    stats[c] = {lo, hi};
    const double range = hi - lo;
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
      out.features(r, c) =
          range == 0.0 ? 0.0 : (dataset.features(r, c) - lo) / range;
    }
  }
  out.normalization = std::move(stats);
  return out;
}

Dataset apply_normalization(const Dataset& dataset,
                            const std::vector<ColumnStats>& stats) {
  if (stats.size() != dataset.cols()) {
    throw DimensionMismatchError("normalization stats cover " +
                                 std::to_string(stats.size()) +
                                 " columns but dataset has " +
                                 std::to_string(dataset.cols()));
  }
  Dataset out = dataset;
  for (std::size_t c = 0; c < dataset.cols(); ++c) {
    const double range = stats[c].max - stats[c].min;
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
      double v = range == 0.0 ? 0.0 : (dataset.features(r, c) - stats[c].min) / range;
      out.features(r, c) = std::clamp(v, 0.0, 1.0);
    }
  }
  out.normalization = stats;
  return out;
}

Dataset generate_synthetic(std::size_t n_per_class, std::size_t n_features,
                           double separation, std::uint64_t seed) {
  if (n_per_class == 0) throw PreconditionError("n_per_class must be positive");
  if (n_features == 0) throw PreconditionError("n_features must be positive");
  if (!(separation >= 0.0 && separation < 1.0)) {
    throw PreconditionError("separation must lie in [0, 1), got " +
                            format_double(separation));
  }
  const double low_hi = 0.5 - separation / 2.0;
  const double high_lo = 0.5 + separation / 2.0;
  SplitMix64 rng(seed);
  Dataset dataset;
  dataset.features = Matrix(2 * n_per_class, n_features);
  dataset.labels.assign(2 * n_per_class, 0);
  for (std::size_t r = 0; r < 2 * n_per_class; ++r) {
    const bool high = r >= n_per_class;
    if (high) dataset.labels[r] = 1;
    for (std::size_t c = 0; c < n_features; ++c) {
      const double u = rng.next_double();
      dataset.features(r, c) = high ? high_lo + u * (1.0 - high_lo) : u * low_hi;
    }
  }
  for (std::size_t c = 0; c < n_features; ++c) {
    dataset.feature_names.push_back("f" + std::to_string(c + 1));
  }
  return dataset;
}

Dataset select_columns(const Dataset& dataset, std::span<const std::size_t> columns) {
  for (std::size_t c : columns) {
    if (c >= dataset.cols()) {
      throw PreconditionError("column index " + std::to_string(c) +
                              " out of range for " + std::to_string(dataset.cols()) +
                              " columns");
    }
  }
  Dataset out;
  out.labels = dataset.labels;
  out.label_name = dataset.label_name;
  out.features = Matrix(dataset.rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const std::size_t c = columns[j];
    out.feature_names.push_back(c < dataset.feature_names.size()
                                    ? dataset.feature_names[c]
                                    : "f" + std::to_string(c + 1));
    for (std::size_t r = 0; r < dataset.rows(); ++r) {
      out.features(r, j) = dataset.features(r, c);
    }
  }
  if (dataset.normalization) {
    std::vector<ColumnStats> stats;
    for (std::size_t c : columns) stats.push_back((*dataset.normalization)[c]);
    out.normalization = std::move(stats);
  }
  return out;
}

Dataset select_rows(const Dataset& dataset, std::span<const std::size_t> rows) {
  for (std::size_t r : rows) {
    if (r >= dataset.rows()) {
      throw PreconditionError("row index " + std::to_string(r) +
                              " out of range for " + std::to_string(dataset.rows()) +
                              " rows");
    }
  }
  Dataset out;
  out.feature_names = dataset.feature_names;
  out.label_name = dataset.label_name;
  out.normalization = dataset.normalization;
  out.features = Matrix(rows.size(), dataset.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::size_t r = rows[i];
    out.labels.push_back(dataset.labels[r]);
    for (std::size_t c = 0; c < dataset.cols(); ++c) {
      out.features(i, c) = dataset.features(r, c);
    }
  }
  return out;
}

} // namespace chaosnet
