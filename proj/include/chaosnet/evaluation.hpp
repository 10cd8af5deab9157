#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "chaosnet/dataset.hpp"
#include "chaosnet/ttss.hpp"

namespace chaosnet {

/// How to carve a labeled dataset into train and test rows.
///
/// FractionStratified takes ceil(train_fraction * count_c) rows of each
/// class c for training; PerClassCount takes exactly per_class rows of
/// each class; KFold deals each class round-robin into `folds`
/// stratified folds. All modes draw from one seeded generator and are
/// deterministic functions of (labels, seed).
struct SplitSpec {
  enum class Mode { FractionStratified, PerClassCount, KFold };

  Mode mode = Mode::FractionStratified;
  double train_fraction = 0.2;
  std::size_t per_class = 1;
  std::size_t folds = 10;
  std::uint64_t seed = 0;

  static SplitSpec fraction(double train_fraction, std::uint64_t seed);
  static SplitSpec per_class_count(std::size_t m, std::uint64_t seed);
  static SplitSpec kfold(std::size_t k, std::uint64_t seed);

  /// Throws PreconditionError unless the active mode's parameter is in
  /// range (fraction in (0,1), per_class >= 1, folds >= 2).
  void validate() const;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

/// Hyperparameter lattice for grid_search: the cross product of the
/// three value lists, walked b-outermost and epsilon-innermost.
struct GridSpec {
  std::vector<double> b_values;
  std::vector<double> q_values;
  std::vector<double> epsilon_values;

  enum class Metric { Accuracy };
  Metric selection_metric = Metric::Accuracy;

  /// Throws PreconditionError if any list is empty or a value is
  /// outside its domain (b in (0,1), q in [0,1], epsilon > 0).
  void validate() const;
};

enum class NormalizationMode {
  FullDataset, ///< scale on the whole dataset before splitting (default)
  TrainOnly    ///< scale on train rows only; test values clamped to [0,1]
};

struct EvalOptions {
  NormalizationMode normalization = NormalizationMode::FullDataset;
  std::size_t threads = 1;
};

/// Outcome of one evaluation. confusion[i][j] counts test rows of true
/// class class_labels[i] predicted as class_labels[j]; its entries sum
/// to n_test. For k-fold splits the folds' confusions are summed, every
/// row serves as test exactly once, and n_train is the mean train-fold
/// size rounded down.
struct EvalReport {
  double accuracy = 0.0;
  std::vector<std::vector<std::uint64_t>> confusion;
  std::vector<double> per_class_recall;
  std::vector<int> class_labels;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  TtssParams params;
  std::optional<std::vector<std::size_t>> feature_subset; ///< 0-based columns
  SplitSpec split;
};

struct TrainTestIndices {
  std::vector<std::size_t> train; ///< ascending row indices
  std::vector<std::size_t> test;  ///< ascending row indices
};

struct GridSearchResult {
  struct Row {
    TtssParams params;
    double mean_accuracy = 0.0;
    std::vector<double> accuracies; ///< one per repeat, in repeat order
  };

  TtssParams best;
  std::vector<Row> table; ///< grid order, independent of scores
};

struct CurvePoint {
  std::size_t m = 0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;           ///< sample std; 0 when repeats == 1
  std::vector<double> accuracies;      ///< one per repeat, in repeat order
};

struct SubsetResult {
  std::vector<std::size_t> subset; ///< 0-based columns
  EvalReport report;
};

/// Trace over total of a square count matrix.
/// Throws DimensionMismatchError for ragged or non-square input and
/// EmptyTestSetError when all entries are zero.
double accuracy(const std::vector<std::vector<std::uint64_t>>& confusion);

/// Stratified train/test rows for the FractionStratified and
/// PerClassCount modes (use stratified_fold_indices for KFold). Train
/// and test are disjoint, cover the dataset, and are sorted ascending
/// so row order survives the split. Requires at least two classes;
/// throws InsufficientClassCountError when a class cannot supply the
/// requested rows.
TrainTestIndices train_test_split(const Dataset& dataset, const SplitSpec& spec);

/// k stratified folds of row indices, each sorted ascending. Every
/// class needs at least k rows.
std::vector<std::vector<std::size_t>> stratified_fold_indices(
    const Dataset& dataset, std::size_t k, std::uint64_t seed);

/// One full pipeline run: (optional column subset) -> normalize ->
/// split -> extract train features -> fit -> extract test features ->
/// predict -> metrics. Under KFold the per-fold confusions are summed.
EvalReport evaluate_once(
    const Dataset& dataset, const SplitSpec& spec, const TtssParams& params,
    const std::optional<std::vector<std::size_t>>& feature_subset = std::nullopt,
    const EvalOptions& options = {});

/// Evaluates every (b, q, epsilon) grid point with `repeats` reseeded
/// evaluations and returns the argmax of mean accuracy; ties go to the
/// smaller b, then q, then epsilon. Each repeat r uses the seed derived
/// from (spec.seed, r), shared across grid points so points face the
/// same splits. `base` supplies the map variant and iteration cap.
GridSearchResult grid_search(const Dataset& dataset, const GridSpec& grid,
                             const SplitSpec& spec, std::size_t repeats,
                             const TtssParams& base = {},
                             const EvalOptions& options = {});

/// Accuracy as a function of training instances per class. For each
/// repeat the per-class row orders are shuffled once and every m takes
/// the first m rows per class, so train sets grow by inclusion along
/// the curve; the test set is always the remaining rows.
std::vector<CurvePoint> learning_curve(const Dataset& dataset,
                                       const TtssParams& params,
                                       const std::vector<std::size_t>& m_values,
                                       std::size_t repeats, std::uint64_t seed,
                                       const EvalOptions& options = {});

/// evaluate_once per column subset, returned ranked by accuracy
/// (descending, stable in input order on ties).
std::vector<SubsetResult> feature_subset_eval(
    const Dataset& dataset, const std::vector<std::vector<std::size_t>>& subsets,
    const SplitSpec& spec, const TtssParams& params,
    const EvalOptions& options = {});

} // namespace chaosnet
