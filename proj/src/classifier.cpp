#include "chaosnet/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "chaosnet/textio.hpp"

namespace chaosnet {

namespace {

void check_feature_entries(const FeatureMatrix& features) {
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j) {
      const double v = features(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw PreconditionError("feature(" + std::to_string(i) + "," +
                                std::to_string(j) + ") outside [0,1]");
    }
}

ClassModel fit_impl(const FeatureMatrix& features, const std::vector<int>& labels,
                    const TtssParams& params,
                    const std::vector<int>* declared) {
  params.validate();
  if (labels.size() != features.rows())
    throw DimensionMismatchError("fit: " + std::to_string(labels.size()) +
                                 " labels for " + std::to_string(features.rows()) +
                                 " feature rows");
  check_feature_entries(features);

  std::map<int, std::size_t> counts; // label -> row count, sorted by label
  for (int label : labels) ++counts[label];

  std::vector<int> class_labels;
  if (declared) {
    class_labels = *declared;
    std::sort(class_labels.begin(), class_labels.end());
    class_labels.erase(std::unique(class_labels.begin(), class_labels.end()),
                       class_labels.end());
    for (const auto& [label, _] : counts)
      if (!std::binary_search(class_labels.begin(), class_labels.end(), label))
        throw PreconditionError("row label " + std::to_string(label) +
                                " is not in the declared class set");
    for (int label : class_labels)
      if (!counts.contains(label))
        throw EmptyClassError("class " + std::to_string(label) +
                              " has no training rows");
  } else {
    for (const auto& [label, _] : counts) class_labels.push_back(label);
  }
  if (class_labels.size() < 2)
    throw InsufficientClassCountError("fit needs at least 2 distinct classes, got " +
                                      std::to_string(class_labels.size()));

  const std::size_t k = class_labels.size();
  const std::size_t n = features.cols();
  Matrix sums(k, n);
  std::map<int, std::size_t> class_index;
  for (std::size_t s = 0; s < k; ++s) class_index[class_labels[s]] = s;

  for (std::size_t i = 0; i < features.rows(); ++i) {
    const std::size_t s = class_index.at(labels[i]);
    for (std::size_t j = 0; j < n; ++j) sums(s, j) += features(i, j);
  }
  for (std::size_t s = 0; s < k; ++s) {
    const auto m = static_cast<double>(counts.at(class_labels[s]));
    for (std::size_t j = 0; j < n; ++j) sums(s, j) /= m;
  }
  return ClassModel{std::move(class_labels), std::move(sums), params};
}

} // namespace

ClassModel fit(const FeatureMatrix& features, const std::vector<int>& labels,
               const TtssParams& params) {
  return fit_impl(features, labels, params, nullptr);
}

ClassModel fit(const FeatureMatrix& features, const std::vector<int>& labels,
               const TtssParams& params, const std::vector<int>& class_labels) {
  return fit_impl(features, labels, params, &class_labels);
}

double cosine_similarity(std::span<const double> f, std::span<const double> m) {
  if (f.size() != m.size())
    throw DimensionMismatchError("cosine_similarity: length " +
                                 std::to_string(f.size()) + " vs " +
                                 std::to_string(m.size()));
  if (f.empty())
    throw PreconditionError("cosine_similarity: vectors must be non-empty");
  double dot = 0.0, ff = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    dot += f[i] * m[i];
    ff += f[i] * f[i];
    mm += m[i] * m[i];
  }
  if (ff == 0.0 || mm == 0.0) return 0.0;
  // One square root of the product, not a product of square roots: the
  // single rounding keeps cos(v, v) and cos(v, s*v) at exactly 1.
  const double c = dot / std::sqrt(ff * mm);
  return std::clamp(c, -1.0, 1.0);
}

Prediction predict_row(const ClassModel& model, std::span<const double> f) {
  if (f.size() != model.num_features())
    throw DimensionMismatchError("predict: row length " + std::to_string(f.size()) +
                                 " vs model feature count " +
                                 std::to_string(model.num_features()));
  Prediction out;
  out.similarities.reserve(model.num_classes());
  std::size_t best = 0;
  for (std::size_t s = 0; s < model.num_classes(); ++s) {
    const double sim = cosine_similarity(f, model.mean_vectors.row(s));
    out.similarities.push_back(sim);
    // strict > keeps the earliest (= smallest label) on ties
    if (sim > out.similarities[best]) best = s;
  }
  out.label = model.class_labels[best];
  return out;
}

std::vector<Prediction> predict(const ClassModel& model,
                                const FeatureMatrix& features) {
  std::vector<Prediction> out;
  out.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i)
    out.push_back(predict_row(model, features.row(i)));
  return out;
}

std::string model_to_string(const ClassModel& model) {
  std::ostringstream out;
  out << "chaosnet-model-v1\n";
  out << "map " << to_string(model.params.neuron.variant()) << '\n';
  out << "b " << format_double(model.params.neuron.b()) << '\n';
  out << "q " << format_double(model.params.q) << '\n';
  out << "epsilon " << format_double(model.params.epsilon) << '\n';
  out << "max_iterations " << model.params.max_iterations << '\n';
  out << "classes " << model.num_classes() << '\n';
  out << "features " << model.num_features() << '\n';
  out << "labels";
  for (int label : model.class_labels) out << ' ' << label;
  out << '\n';
  out << "means\n";
  for (std::size_t s = 0; s < model.num_classes(); ++s) {
    const auto row = model.mean_vectors.row(s);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << format_double(row[j]);
    }
    out << '\n';
  }
  out << "end\n";
  return out.str();
}

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

double require_double(std::string_view s, std::size_t line_no, const char* what) {
  const auto v = parse_double(trim(s));
  if (!v)
    throw ParseError("model file: bad " + std::string(what) + " value '" +
                         std::string(s) + "'",
                     line_no);
  return *v;
}

} // namespace

ClassModel model_from_string(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || trim(lines[0]) != "chaosnet-model-v1")
    throw ParseError("model file: missing or unsupported format header "
                     "(expected chaosnet-model-v1)",
                     1);

  std::map<std::string, std::string, std::less<>> kv;
  std::vector<int> labels;
  std::size_t means_line = 0;
  for (std::size_t idx = 1; idx < lines.size(); ++idx) {
    const std::string_view line = trim(lines[idx]);
    if (line.empty()) continue;
    if (line == "means") {
      means_line = idx + 1; // 0-based index of the first matrix row
      break;
    }
    const std::size_t space = line.find(' ');
    if (space == std::string_view::npos)
      throw ParseError("model file: expected 'key value' line", idx + 1);
    kv.emplace(std::string(trim(line.substr(0, space))),
               std::string(trim(line.substr(space + 1))));
  }
  if (means_line == 0) throw ParseError("model file: missing means block");

  for (const char* key : {"map", "b", "q", "epsilon", "max_iterations", "classes",
                          "features", "labels"})
    if (!kv.contains(key))
      throw ParseError("model file: missing key '" + std::string(key) + "'");

  const MapVariant variant = map_variant_from_string(kv.at("map"));
  const double b = require_double(kv.at("b"), 0, "b");
  const double q = require_double(kv.at("q"), 0, "q");
  const double epsilon = require_double(kv.at("epsilon"), 0, "epsilon");
  const auto max_it = parse_label(kv.at("max_iterations"));
  const auto n_classes = parse_label(kv.at("classes"));
  const auto n_features = parse_label(kv.at("features"));
  if (!max_it || *max_it < 1) throw ParseError("model file: bad max_iterations");
  if (!n_classes || *n_classes < 2) throw ParseError("model file: bad classes");
  if (!n_features || *n_features < 1) throw ParseError("model file: bad features");

  for (const auto field : split_fields(kv.at("labels"))) {
    const auto v = parse_label(field);
    if (!v) throw ParseError("model file: bad label '" + std::string(field) + "'");
    labels.push_back(static_cast<int>(*v));
  }
  if (labels.size() != static_cast<std::size_t>(*n_classes))
    throw ParseError("model file: label count does not match classes");
  if (!std::is_sorted(labels.begin(), labels.end()) ||
      std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw ParseError("model file: labels must be strictly ascending");

  const auto k = static_cast<std::size_t>(*n_classes);
  const auto n = static_cast<std::size_t>(*n_features);
  Matrix means(k, n);
  std::size_t row = 0;
  std::size_t idx = means_line;
  for (; idx < lines.size() && row < k; ++idx) {
    const std::string_view line = trim(lines[idx]);
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != n)
      throw ParseError("model file: mean row has " + std::to_string(fields.size()) +
                           " values, expected " + std::to_string(n),
                       idx + 1);
    for (std::size_t j = 0; j < n; ++j)
      means(row, j) = require_double(fields[j], idx + 1, "mean");
    ++row;
  }
  if (row != k) throw ParseError("model file: expected " + std::to_string(k) +
                                 " mean rows, found " + std::to_string(row));
  bool terminated = false;
  for (; idx < lines.size(); ++idx) {
    const std::string_view line = trim(lines[idx]);
    if (line.empty()) continue;
    if (line == "end" && !terminated) {
      terminated = true;
      continue;
    }
    throw ParseError("model file: unexpected content after means block", idx + 1);
  }
  if (!terminated) throw ParseError("model file: missing end marker");

  TtssParams params(GlsNeuron(variant, b), q, epsilon,
                    static_cast<std::uint64_t>(*max_it));
  return ClassModel{std::move(labels), std::move(means), params};
}

void save_model(const ClassModel& model, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_string(model));
}

ClassModel load_model(const std::filesystem::path& path) {
  return model_from_string(read_file(path));
}

} // namespace chaosnet
