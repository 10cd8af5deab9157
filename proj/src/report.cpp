#include "chaosnet/report.hpp"

#include <string>

#include "chaosnet/textio.hpp"

namespace chaosnet {

namespace {

nlohmann::ordered_json params_json(const TtssParams& params) {
  nlohmann::ordered_json j;
  j["map"] = std::string(to_string(params.neuron.variant()));
  j["b"] = params.neuron.b();
  j["q"] = params.q;
  j["epsilon"] = params.epsilon;
  j["max_iterations"] = params.max_iterations;
  return j;
}

nlohmann::ordered_json split_json(const SplitSpec& spec) {
  nlohmann::ordered_json j;
  switch (spec.mode) {
  case SplitSpec::Mode::FractionStratified:
    j["mode"] = "fraction";
    j["train_fraction"] = spec.train_fraction;
    break;
  case SplitSpec::Mode::PerClassCount:
    j["mode"] = "per-class";
    j["per_class"] = spec.per_class;
    break;
  case SplitSpec::Mode::KFold:
    j["mode"] = "kfold";
    j["folds"] = spec.folds;
    break;
  }
  j["seed"] = spec.seed;
  return j;
}

std::vector<std::size_t> to_one_based(const std::vector<std::size_t>& columns) {
  std::vector<std::size_t> out;
  out.reserve(columns.size());
  for (std::size_t c : columns) out.push_back(c + 1);
  return out;
}

std::string join_one_based(const std::vector<std::size_t>& columns) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(columns[i] + 1);
  }
  return out;
}

} // namespace

nlohmann::ordered_json eval_record(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "chaosnet-eval-v1";
  j["accuracy"] = report.accuracy;
  j["n_train"] = report.n_train;
  j["n_test"] = report.n_test;
  j["class_labels"] = report.class_labels;
  j["confusion"] = report.confusion;
  j["per_class_recall"] = report.per_class_recall;
  j["params"] = params_json(report.params);
  j["split"] = split_json(report.split);
  if (report.feature_subset) j["features"] = to_one_based(*report.feature_subset);
  return j;
}

nlohmann::ordered_json curve_record(const CurvePoint& point,
                                    const TtssParams& params,
                                    std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["schema"] = "chaosnet-curve-v1";
  j["m"] = point.m;
  j["mean_accuracy"] = point.mean_accuracy;
  j["std_accuracy"] = point.std_accuracy;
  j["accuracies"] = point.accuracies;
  j["params"] = params_json(params);
  j["seed"] = seed;
  return j;
}

nlohmann::ordered_json tune_record(const GridSearchResult::Row& row,
                                   bool is_best) {
  nlohmann::ordered_json j;
  j["schema"] = "chaosnet-tune-v1";
  j["b"] = row.params.neuron.b();
  j["q"] = row.params.q;
  j["epsilon"] = row.params.epsilon;
  j["mean_accuracy"] = row.mean_accuracy;
  j["accuracies"] = row.accuracies;
  j["best"] = is_best;
  return j;
}

std::string to_jsonl(const std::vector<nlohmann::ordered_json>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record.dump();
    out += '\n';
  }
  return out;
}

std::string eval_table(const EvalReport& report) {
  std::string out;
  out += "accuracy\t" + format_double(report.accuracy) + '\n';
  out += "n_train\t" + std::to_string(report.n_train) + '\n';
  out += "n_test\t" + std::to_string(report.n_test) + '\n';
  if (report.feature_subset) {
    out += "features\t" + join_one_based(*report.feature_subset) + '\n';
  }
  out += "confusion (rows true, columns predicted)\n";
  out += "label";
  for (int label : report.class_labels) out += '\t' + std::to_string(label);
  out += "\trecall\n";
  for (std::size_t i = 0; i < report.class_labels.size(); ++i) {
    out += std::to_string(report.class_labels[i]);
    for (std::uint64_t v : report.confusion[i]) out += '\t' + std::to_string(v);
    out += '\t' + format_double(report.per_class_recall[i]) + '\n';
  }
  return out;
}

std::string curve_table(const std::vector<CurvePoint>& points) {
  std::string out = "m\tmean_accuracy\tstd_accuracy\n";
  for (const auto& point : points) {
    out += std::to_string(point.m) + '\t' + format_double(point.mean_accuracy) +
           '\t' + format_double(point.std_accuracy) + '\n';
  }
  return out;
}

std::string tune_table(const GridSearchResult& result) {
  std::string out = "b\tq\tepsilon\tmean_accuracy\tbest\n";
  for (const auto& row : result.table) {
    const bool is_best = row.params == result.best;
    out += format_double(row.params.neuron.b()) + '\t' +
           format_double(row.params.q) + '\t' +
           format_double(row.params.epsilon) + '\t' +
           format_double(row.mean_accuracy) + '\t' + (is_best ? "*" : "") + '\n';
  }
  return out;
}

std::string subsets_table(const std::vector<SubsetResult>& results) {
  std::string out = "rank\tfeatures\taccuracy\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    out += std::to_string(i + 1) + '\t' + join_one_based(results[i].subset) +
           '\t' + format_double(results[i].report.accuracy) + '\n';
  }
  return out;
}

} // namespace chaosnet
