#include "chaosnet/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <utility>

#include "chaosnet/classifier.hpp"
#include "chaosnet/errors.hpp"
#include "chaosnet/rng.hpp"
#include "chaosnet/textio.hpp"

namespace chaosnet {

namespace {

struct ClassGroup {
  int label;
  std::vector<std::size_t> rows; // dataset order
};

std::vector<ClassGroup> group_by_label(const std::vector<int>& labels) {
  std::map<int, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < labels.size(); ++i) by_label[labels[i]].push_back(i);
  std::vector<ClassGroup> groups;
  groups.reserve(by_label.size());
  for (auto& [label, rows] : by_label) groups.push_back({label, std::move(rows)});
  return groups;
}

void require_two_classes(const std::vector<ClassGroup>& groups) {
  if (groups.size() < 2) {
    throw InsufficientClassCountError(
        "stratified evaluation needs at least 2 classes, found " +
        std::to_string(groups.size()));
  }
}

std::vector<std::size_t> complement_of(const std::vector<std::size_t>& subset,
                                       std::size_t n) {
  std::vector<char> taken(n, 0);
  for (std::size_t i : subset) taken[i] = 1;
  std::vector<std::size_t> out;
  out.reserve(n - subset.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) out.push_back(i);
  }
  return out;
}

Matrix select_matrix_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
  Matrix out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = m.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

std::vector<int> select_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t i : rows) out.push_back(labels[i]);
  return out;
}

std::size_t label_index(const std::vector<int>& class_labels, int label) {
  auto it = std::lower_bound(class_labels.begin(), class_labels.end(), label);
  if (it == class_labels.end() || *it != label) {
    throw PreconditionError("label " + std::to_string(label) +
                            " is not in the class label set");
  }
  return static_cast<std::size_t>(it - class_labels.begin());
}

std::vector<std::vector<std::uint64_t>> confusion_for(
    const FeatureMatrix& train_features, const std::vector<int>& train_labels,
    const FeatureMatrix& test_features, const std::vector<int>& test_labels,
    const std::vector<int>& class_labels, const TtssParams& params) {
  const ClassModel model = fit(train_features, train_labels, params, class_labels);
  std::vector<std::vector<std::uint64_t>> confusion(
      class_labels.size(), std::vector<std::uint64_t>(class_labels.size(), 0));
  for (std::size_t i = 0; i < test_features.rows(); ++i) {
    const Prediction pred = predict_row(model, test_features.row(i));
    ++confusion[label_index(class_labels, test_labels[i])]
               [label_index(class_labels, pred.label)];
  }
  return confusion;
}

/// Runs the feature side of the pipeline for any number of splits of one
/// dataset. Under FullDataset normalization the scaling and the TT-SS
/// extraction depend only on the dataset, so both are done once up front
/// and every split reuses the rows; per-row extraction is deterministic,
/// so the result is identical to extracting train and test separately.
/// Under TrainOnly each split must rescale and extract from scratch.
class SplitEvaluator {
public:
  SplitEvaluator(const Dataset& raw, const TtssParams& params,
                 const EvalOptions& options)
      : raw_(raw), params_(params), options_(options) {
    if (options_.normalization == NormalizationMode::FullDataset) {
      const Dataset normalized = normalize(raw_);
      features_ = extract_features(normalized.features, params_, options_.threads);
    }
  }

  std::vector<std::vector<std::uint64_t>> confusion(
      const TrainTestIndices& idx, const std::vector<int>& class_labels) const {
    if (options_.normalization == NormalizationMode::FullDataset) {
      return confusion_for(select_matrix_rows(features_, idx.train),
                           select_labels(raw_.labels, idx.train),
                           select_matrix_rows(features_, idx.test),
                           select_labels(raw_.labels, idx.test), class_labels,
                           params_);
    }
    const Dataset train_norm = normalize(select_rows(raw_, idx.train));
    const Dataset test_norm =
        apply_normalization(select_rows(raw_, idx.test), *train_norm.normalization);
    const FeatureMatrix train_features =
        extract_features(train_norm.features, params_, options_.threads);
    const FeatureMatrix test_features =
        extract_features(test_norm.features, params_, options_.threads);
    return confusion_for(train_features, train_norm.labels, test_features,
                         test_norm.labels, class_labels, params_);
  }

private:
  const Dataset& raw_;
  TtssParams params_;
  EvalOptions options_;
  FeatureMatrix features_;
};

EvalReport make_report(std::vector<std::vector<std::uint64_t>> confusion,
                       std::vector<int> class_labels, std::size_t n_train,
                       std::size_t n_test, const TtssParams& params,
                       const std::optional<std::vector<std::size_t>>& subset,
                       const SplitSpec& spec) {
  EvalReport report;
  report.confusion = std::move(confusion);
  report.accuracy = accuracy(report.confusion);
  report.per_class_recall.reserve(report.confusion.size());
  for (std::size_t i = 0; i < report.confusion.size(); ++i) {
    std::uint64_t row_total = 0;
    for (std::uint64_t v : report.confusion[i]) row_total += v;
    report.per_class_recall.push_back(
        row_total == 0 ? 0.0
                       : static_cast<double>(report.confusion[i][i]) /
                             static_cast<double>(row_total));
  }
  report.class_labels = std::move(class_labels);
  report.n_train = n_train;
  report.n_test = n_test;
  report.params = params;
  report.feature_subset = subset;
  report.split = spec;
  return report;
}

/// evaluate_once with the working dataset and evaluator already built,
/// so callers with many splits (grid search, curves) can share them.
EvalReport evaluate_prepared(
    const Dataset& working, const std::vector<int>& class_labels,
    const SplitEvaluator& evaluator, const SplitSpec& spec,
    const TtssParams& params,
    const std::optional<std::vector<std::size_t>>& subset_echo) {
  if (spec.mode == SplitSpec::Mode::KFold) {
    const auto folds = stratified_fold_indices(working, spec.folds, spec.seed);
    std::vector<std::vector<std::uint64_t>> total(
        class_labels.size(), std::vector<std::uint64_t>(class_labels.size(), 0));
    std::size_t train_rows_summed = 0;
    for (const auto& fold : folds) {
      TrainTestIndices idx;
      idx.test = fold;
      idx.train = complement_of(fold, working.rows());
      train_rows_summed += idx.train.size();
      const auto part = evaluator.confusion(idx, class_labels);
      for (std::size_t i = 0; i < total.size(); ++i) {
        for (std::size_t j = 0; j < total.size(); ++j) total[i][j] += part[i][j];
      }
    }
    return make_report(std::move(total), class_labels,
                       train_rows_summed / folds.size(), working.rows(), params,
                       subset_echo, spec);
  }
  const TrainTestIndices idx = train_test_split(working, spec);
  auto confusion = evaluator.confusion(idx, class_labels);
  return make_report(std::move(confusion), class_labels, idx.train.size(),
                     idx.test.size(), params, subset_echo, spec);
}

double sample_std(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace

SplitSpec SplitSpec::fraction(double train_fraction, std::uint64_t seed) {
  SplitSpec spec;
  spec.mode = Mode::FractionStratified;
  spec.train_fraction = train_fraction;
  spec.seed = seed;
  spec.validate();
  return spec;
}

SplitSpec SplitSpec::per_class_count(std::size_t m, std::uint64_t seed) {
  SplitSpec spec;
  spec.mode = Mode::PerClassCount;
  spec.per_class = m;
  spec.seed = seed;
  spec.validate();
  return spec;
}

SplitSpec SplitSpec::kfold(std::size_t k, std::uint64_t seed) {
  SplitSpec spec;
  spec.mode = Mode::KFold;
  spec.folds = k;
  spec.seed = seed;
  spec.validate();
  return spec;
}

void SplitSpec::validate() const {
  switch (mode) {
  case Mode::FractionStratified:
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw PreconditionError("train_fraction must lie in (0, 1), got " +
                              format_double(train_fraction));
    }
    break;
  case Mode::PerClassCount:
    if (per_class < 1) throw PreconditionError("per_class must be >= 1");
    break;
  case Mode::KFold:
    if (folds < 2) throw PreconditionError("folds must be >= 2");
    break;
  }
}

void GridSpec::validate() const {
  if (b_values.empty() || q_values.empty() || epsilon_values.empty()) {
    throw PreconditionError("grid value lists must be non-empty");
  }
  for (double b : b_values) {
    if (!(b > 0.0 && b < 1.0)) {
      throw PreconditionError("grid b value " + format_double(b) +
                              " outside (0, 1)");
    }
  }
  for (double q : q_values) {
    if (!(q >= 0.0 && q <= 1.0)) {
      throw PreconditionError("grid q value " + format_double(q) +
                              " outside [0, 1]");
    }
  }
  for (double eps : epsilon_values) {
    if (!(eps > 0.0)) {
      throw PreconditionError("grid epsilon value " + format_double(eps) +
                              " must be > 0");
    }
  }
}

double accuracy(const std::vector<std::vector<std::uint64_t>>& confusion) {
  const std::size_t k = confusion.size();
  std::uint64_t total = 0;
  std::uint64_t diagonal = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (confusion[i].size() != k) {
      throw DimensionMismatchError("confusion matrix must be square");
    }
    for (std::size_t j = 0; j < k; ++j) total += confusion[i][j];
    diagonal += confusion[i][i];
  }
  if (total == 0) throw EmptyTestSetError("confusion matrix counts no test rows");
  return static_cast<double>(diagonal) / static_cast<double>(total);
}

TrainTestIndices train_test_split(const Dataset& dataset, const SplitSpec& spec) {
  spec.validate();
  if (spec.mode == SplitSpec::Mode::KFold) {
    throw PreconditionError(
        "train_test_split handles the two train/test modes; use "
        "stratified_fold_indices for k-fold");
  }
  const auto groups = group_by_label(dataset.labels);
  require_two_classes(groups);
  SplitMix64 rng(spec.seed);
  TrainTestIndices idx;
  for (const auto& group : groups) {
    auto rows = group.rows;
    fisher_yates_shuffle(rows, rng);
    std::size_t want;
    if (spec.mode == SplitSpec::Mode::FractionStratified) {
      want = static_cast<std::size_t>(
          std::ceil(spec.train_fraction * static_cast<double>(rows.size())));
    } else {
      want = spec.per_class;
    }
    if (want > rows.size()) {
      throw InsufficientClassCountError(
          "class " + std::to_string(group.label) + " has " +
          std::to_string(rows.size()) + " rows but the split requests " +
          std::to_string(want));
    }
    idx.train.insert(idx.train.end(), rows.begin(), rows.begin() + want);
  }
  std::sort(idx.train.begin(), idx.train.end());
  idx.test = complement_of(idx.train, dataset.rows());
  return idx;
}

std::vector<std::vector<std::size_t>> stratified_fold_indices(
    const Dataset& dataset, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw PreconditionError("fold count must be >= 2");
  const auto groups = group_by_label(dataset.labels);
  require_two_classes(groups);
  SplitMix64 rng(seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (const auto& group : groups) {
    if (group.rows.size() < k) {
      throw InsufficientClassCountError(
          "class " + std::to_string(group.label) + " has " +
          std::to_string(group.rows.size()) + " rows but " + std::to_string(k) +
          " folds were requested");
    }
    auto rows = group.rows;
    fisher_yates_shuffle(rows, rng);
    for (std::size_t i = 0; i < rows.size(); ++i) folds[i % k].push_back(rows[i]);
  }
  for (auto& fold : folds) std::sort(fold.begin(), fold.end());
  return folds;
}

EvalReport evaluate_once(const Dataset& dataset, const SplitSpec& spec,
                         const TtssParams& params,
                         const std::optional<std::vector<std::size_t>>& feature_subset,
                         const EvalOptions& options) {
  spec.validate();
  params.validate();
  if (feature_subset && feature_subset->empty()) {
    throw PreconditionError("feature subset must be non-empty");
  }
  std::optional<Dataset> subset_holder;
  if (feature_subset) subset_holder = select_columns(dataset, *feature_subset);
  const Dataset& working = subset_holder ? *subset_holder : dataset;
  require_two_classes(group_by_label(working.labels));
  const std::vector<int> class_labels = working.distinct_labels();
  const SplitEvaluator evaluator(working, params, options);
  return evaluate_prepared(working, class_labels, evaluator, spec, params,
                           feature_subset);
}

GridSearchResult grid_search(const Dataset& dataset, const GridSpec& grid,
                             const SplitSpec& spec, std::size_t repeats,
                             const TtssParams& base, const EvalOptions& options) {
  grid.validate();
  spec.validate();
  if (repeats < 1) throw PreconditionError("repeats must be >= 1");
  require_two_classes(group_by_label(dataset.labels));
  const std::vector<int> class_labels = dataset.distinct_labels();

  std::vector<std::uint64_t> repeat_seeds;
  repeat_seeds.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    repeat_seeds.push_back(derive_seed(spec.seed, r));
  }

  GridSearchResult result;
  bool have_best = false;
  double best_mean = 0.0;
  for (double b : grid.b_values) {
    for (double q : grid.q_values) {
      for (double eps : grid.epsilon_values) {
        const TtssParams params(GlsNeuron(base.neuron.variant(), b), q, eps,
                                base.max_iterations);
        const SplitEvaluator evaluator(dataset, params, options);
        GridSearchResult::Row row;
        row.params = params;
        double sum = 0.0;
        for (std::uint64_t seed : repeat_seeds) {
          SplitSpec repeat_spec = spec;
          repeat_spec.seed = seed;
          const EvalReport report = evaluate_prepared(
              dataset, class_labels, evaluator, repeat_spec, params, std::nullopt);
          row.accuracies.push_back(report.accuracy);
          sum += report.accuracy;
        }
        row.mean_accuracy = sum / static_cast<double>(repeats);
        const auto candidate = std::make_tuple(b, q, eps);
        const auto incumbent =
            std::make_tuple(result.best.neuron.b(), result.best.q,
                            result.best.epsilon);
        if (!have_best || row.mean_accuracy > best_mean ||
            (row.mean_accuracy == best_mean && candidate < incumbent)) {
          have_best = true;
          best_mean = row.mean_accuracy;
          result.best = params;
        }
        result.table.push_back(std::move(row));
      }
    }
  }
  return result;
}

std::vector<CurvePoint> learning_curve(const Dataset& dataset,
                                       const TtssParams& params,
                                       const std::vector<std::size_t>& m_values,
                                       std::size_t repeats, std::uint64_t seed,
                                       const EvalOptions& options) {
  params.validate();
  if (m_values.empty()) throw PreconditionError("m_values must be non-empty");
  if (repeats < 1) throw PreconditionError("repeats must be >= 1");
  const auto groups = group_by_label(dataset.labels);
  require_two_classes(groups);
  for (std::size_t m : m_values) {
    if (m < 1) throw PreconditionError("every m value must be >= 1");
    for (const auto& group : groups) {
      if (m > group.rows.size()) {
        throw InsufficientClassCountError(
            "class " + std::to_string(group.label) + " has " +
            std::to_string(group.rows.size()) + " rows but m=" +
            std::to_string(m) + " was requested");
      }
    }
  }

  const std::vector<int> class_labels = dataset.distinct_labels();
  const SplitEvaluator evaluator(dataset, params, options);

  std::vector<CurvePoint> points(m_values.size());
  for (std::size_t i = 0; i < m_values.size(); ++i) points[i].m = m_values[i];

  for (std::size_t r = 0; r < repeats; ++r) {
    // One shuffle of each class per repeat; every m value then takes the
    // first m rows per class. Train sets therefore grow by inclusion along
    // the curve, and each (m, repeat) split is exactly the
    // PerClassCount(m) split under this repeat's derived seed.
    SplitMix64 rng(derive_seed(seed, r));
    std::vector<std::vector<std::size_t>> orders;
    orders.reserve(groups.size());
    for (const auto& group : groups) {
      auto rows = group.rows;
      fisher_yates_shuffle(rows, rng);
      orders.push_back(std::move(rows));
    }
    for (std::size_t i = 0; i < m_values.size(); ++i) {
      TrainTestIndices idx;
      for (const auto& order : orders) {
        idx.train.insert(idx.train.end(), order.begin(),
                         order.begin() + static_cast<std::ptrdiff_t>(m_values[i]));
      }
      std::sort(idx.train.begin(), idx.train.end());
      idx.test = complement_of(idx.train, dataset.rows());
      points[i].accuracies.push_back(
          accuracy(evaluator.confusion(idx, class_labels)));
    }
  }

  for (auto& point : points) {
    double sum = 0.0;
    for (double a : point.accuracies) sum += a;
    point.mean_accuracy = sum / static_cast<double>(point.accuracies.size());
    point.std_accuracy = sample_std(point.accuracies, point.mean_accuracy);
  }
  return points;
}

std::vector<SubsetResult> feature_subset_eval(
    const Dataset& dataset, const std::vector<std::vector<std::size_t>>& subsets,
    const SplitSpec& spec, const TtssParams& params, const EvalOptions& options) {
  if (subsets.empty()) throw PreconditionError("subsets must be non-empty");
  std::vector<SubsetResult> results;
  results.reserve(subsets.size());
  for (const auto& subset : subsets) {
    results.push_back({subset, evaluate_once(dataset, spec, params, subset, options)});
  }
  std::stable_sort(results.begin(), results.end(),
                   [](const SubsetResult& a, const SubsetResult& b) {
                     return a.report.accuracy > b.report.accuracy;
                   });
  return results;
}

} // namespace chaosnet
