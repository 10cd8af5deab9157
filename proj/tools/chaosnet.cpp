// chaosnet: experiment CLI over the ChaosNet library. Every subcommand
// is a thin wrapper: flags are validated into library types up front,
// the library does the work, and results are written atomically (or to
// stdout). Exit codes: 0 success, 1 usage error, 2 data error, 3
// non-convergence.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "chaosnet/classifier.hpp"
#include "chaosnet/dataset.hpp"
#include "chaosnet/errors.hpp"
#include "chaosnet/evaluation.hpp"
#include "chaosnet/gls.hpp"
#include "chaosnet/report.hpp"
#include "chaosnet/textio.hpp"
#include "chaosnet/ttss.hpp"

using namespace chaosnet;

namespace {

struct ParamFlags {
  std::string map = "skew-tent";
  double b = 0.89;
  double q = 0.499;
  double epsilon = 0.043;
  std::uint64_t max_iterations = 1'000'000;
};

struct SplitFlags {
  std::string mode = "fraction";
  double train_fraction = 0.2;
  std::size_t per_class = 1;
  std::size_t folds = 10;
};

struct IoFlags {
  std::string input;
  std::string output;
  std::string label_column;
  bool no_labels = false;
  bool table = false;
};

void add_param_flags(CLI::App* sub, ParamFlags& p) {
  sub->add_option("--map", p.map, "GLS map variant")
      ->check(CLI::IsMember({"skew-tent", "skew-binary"}))
      ->capture_default_str();
  sub->add_option("--b", p.b, "internal discrimination threshold, in (0,1)")
      ->capture_default_str();
  sub->add_option("--q", p.q, "initial neural activity, in [0,1]")
      ->capture_default_str();
  sub->add_option("--epsilon", p.epsilon, "stimulus neighborhood half-width, > 0")
      ->capture_default_str();
  sub->add_option("--max-iterations", p.max_iterations,
                  "iteration cap before a firing time counts as divergent")
      ->capture_default_str();
}

void add_split_flags(CLI::App* sub, SplitFlags& s) {
  sub->add_option("--split", s.mode, "train/test split mode")
      ->check(CLI::IsMember({"fraction", "per-class", "kfold"}))
      ->capture_default_str();
  sub->add_option("--train-fraction", s.train_fraction,
                  "train fraction per class (fraction mode)")
      ->capture_default_str();
  sub->add_option("--per-class", s.per_class,
                  "training rows per class (per-class mode)")
      ->capture_default_str();
  sub->add_option("--folds", s.folds, "fold count (kfold mode)")
      ->capture_default_str();
}

void add_input_flags(CLI::App* sub, IoFlags& io) {
  sub->add_option("input", io.input, "input CSV file")->required();
  sub->add_option("--label-column", io.label_column,
                  "label column, by header name or 1-based index (default: "
                  "last column)");
  sub->add_flag("--no-labels", io.no_labels,
                "treat every column as a feature (no label column)");
}

TtssParams make_params(const ParamFlags& p) {
  return TtssParams(GlsNeuron(map_variant_from_string(p.map), p.b), p.q,
                    p.epsilon, p.max_iterations);
}

SplitSpec make_split(const SplitFlags& s, std::uint64_t seed) {
  if (s.mode == "fraction") return SplitSpec::fraction(s.train_fraction, seed);
  if (s.mode == "per-class") return SplitSpec::per_class_count(s.per_class, seed);
  return SplitSpec::kfold(s.folds, seed);
}

std::size_t resolve_threads(std::size_t threads) {
  if (threads != 0) return threads;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : hc;
}

Dataset load_input(const IoFlags& io) {
  const std::filesystem::path path = io.input;
  if (io.no_labels) return load_csv_unlabeled(path);
  if (io.label_column.empty()) return load_csv(path);
  const bool digits = !io.label_column.empty() &&
                      io.label_column.find_first_not_of("0123456789") ==
                          std::string::npos;
  if (digits) {
    const auto idx = parse_label(io.label_column);
    if (!idx || *idx < 1) {
      throw PreconditionError("label column index is 1-based, got " +
                              io.label_column);
    }
    return load_csv(path, static_cast<std::size_t>(*idx - 1));
  }
  return load_csv(path, io.label_column);
}

void emit(const std::string& content, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << content;
  } else {
    write_file_atomic(output_path, content);
  }
}

std::vector<std::string> split_on(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    const std::size_t len = pos == std::string::npos ? std::string::npos
                                                     : pos - start;
    parts.emplace_back(trim(std::string_view(text).substr(start, len)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return parts;
}

/// "1,5,7,8,9" (1-based) -> {0,4,6,7,8}.
std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& part : split_on(text, ',')) {
    const auto v = parse_label(part);
    if (!v || *v < 1) {
      throw PreconditionError("feature indices are 1-based integers, got \"" +
                              part + "\"");
    }
    out.push_back(static_cast<std::size_t>(*v - 1));
  }
  if (out.empty()) throw PreconditionError("empty feature list");
  return out;
}

/// "1,5,7,8,9;2,3" -> two subsets.
std::vector<std::vector<std::size_t>> parse_index_sets(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  for (const std::string& part : split_on(text, ';')) {
    if (part.empty()) continue;
    out.push_back(parse_index_list(part));
  }
  if (out.empty()) throw PreconditionError("empty subset list");
  return out;
}

std::vector<std::size_t> parse_count_list(const std::string& text) {
  std::vector<std::size_t> out;
  for (const std::string& part : split_on(text, ',')) {
    const auto v = parse_label(part);
    if (!v || *v < 1) {
      throw PreconditionError("counts must be positive integers, got \"" + part +
                              "\"");
    }
    out.push_back(static_cast<std::size_t>(*v));
  }
  if (out.empty()) throw PreconditionError("empty count list");
  return out;
}

/// Either "start:stop:step" (inclusive of stop up to rounding) or a
/// comma-separated value list.
std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    const auto parts = split_on(text, ':');
    if (parts.size() != 3) {
      throw PreconditionError("range must be start:stop:step, got \"" + text +
                              "\"");
    }
    const auto start = parse_double(parts[0]);
    const auto stop = parse_double(parts[1]);
    const auto step = parse_double(parts[2]);
    if (!start || !stop || !step || !(*step > 0.0) || *stop < *start) {
      throw PreconditionError("bad range \"" + text +
                              "\" (need stop >= start and step > 0)");
    }
    // Count first, then take equal strides, so 0.1:0.9:0.1 lands on 0.9
    // instead of drifting past it.
    const auto count =
        static_cast<std::size_t>((*stop - *start) / *step + 1e-9);
    for (std::size_t i = 0; i <= count; ++i) {
      out.push_back(*start + static_cast<double>(i) * *step);
    }
    return out;
  }
  for (const std::string& part : split_on(text, ',')) {
    const auto v = parse_double(part);
    if (!v) {
      throw PreconditionError("cannot parse \"" + part + "\" as a number");
    }
    out.push_back(*v);
  }
  if (out.empty()) throw PreconditionError("empty value list");
  return out;
}

void cmd_extract(const ParamFlags& pf, const IoFlags& io, std::size_t threads) {
  const TtssParams params = make_params(pf);
  const Dataset data = load_input(io);
  Dataset out = normalize(data);
  out.features = extract_features(out.features, params, threads);
  out.normalization.reset();
  emit(dataset_to_csv(out, !io.no_labels), io.output);
}

void cmd_train(const ParamFlags& pf, const IoFlags& io,
               const std::string& model_path, std::size_t threads) {
  const TtssParams params = make_params(pf);
  if (io.no_labels) {
    throw PreconditionError("training needs a labeled dataset");
  }
  const Dataset data = load_input(io);
  const Dataset normalized = normalize(data);
  const FeatureMatrix features =
      extract_features(normalized.features, params, threads);
  const ClassModel model = fit(features, normalized.labels, params);
  save_model(model, model_path);
}

void cmd_predict(const IoFlags& io, const std::string& model_path,
                 bool no_normalize, std::size_t threads) {
  const ClassModel model = load_model(model_path);
  const Dataset data = load_input(io);
  const Dataset working = no_normalize ? data : normalize(data);
  const FeatureMatrix features =
      extract_features(working.features, model.params, threads);
  const std::vector<Prediction> predictions = predict(model, features);
  std::string out = "prediction";
  for (int label : model.class_labels) out += ",sim_" + std::to_string(label);
  out += '\n';
  for (const Prediction& p : predictions) {
    out += std::to_string(p.label);
    for (double s : p.similarities) out += ',' + format_double(s);
    out += '\n';
  }
  emit(out, io.output);
}

void cmd_evaluate(const ParamFlags& pf, const SplitFlags& sf, const IoFlags& io,
                  std::uint64_t seed, const std::string& features_flag,
                  const EvalOptions& options) {
  const TtssParams params = make_params(pf);
  const SplitSpec split = make_split(sf, seed);
  std::optional<std::vector<std::size_t>> subset;
  if (!features_flag.empty()) subset = parse_index_list(features_flag);
  const Dataset data = load_input(io);
  const EvalReport report = evaluate_once(data, split, params, subset, options);
  emit(io.table ? eval_table(report) : to_jsonl({eval_record(report)}),
       io.output);
}

void cmd_tune(const ParamFlags& pf, const SplitFlags& sf, const IoFlags& io,
              std::uint64_t seed, std::size_t repeats,
              const std::string& b_grid, const std::string& q_grid,
              const std::string& eps_grid, const EvalOptions& options) {
  const TtssParams base = make_params(pf);
  GridSpec grid;
  grid.b_values = parse_value_list(b_grid);
  grid.q_values = parse_value_list(q_grid);
  grid.epsilon_values = parse_value_list(eps_grid);
  grid.validate();
  const SplitSpec split = make_split(sf, seed);
  const Dataset data = load_input(io);
  const GridSearchResult result =
      grid_search(data, grid, split, repeats, base, options);
  if (io.table) {
    emit(tune_table(result), io.output);
  } else {
    std::vector<nlohmann::ordered_json> records;
    records.reserve(result.table.size());
    for (const auto& row : result.table) {
      records.push_back(tune_record(row, row.params == result.best));
    }
    emit(to_jsonl(records), io.output);
  }
  std::cerr << "best: b=" << format_double(result.best.neuron.b())
            << " q=" << format_double(result.best.q)
            << " epsilon=" << format_double(result.best.epsilon) << '\n';
}

void cmd_curve(const ParamFlags& pf, const IoFlags& io, std::uint64_t seed,
               std::size_t repeats, const std::string& m_flag,
               const EvalOptions& options) {
  const TtssParams params = make_params(pf);
  const std::vector<std::size_t> m_values = parse_count_list(m_flag);
  const Dataset data = load_input(io);
  const std::vector<CurvePoint> points =
      learning_curve(data, params, m_values, repeats, seed, options);
  if (io.table) {
    emit(curve_table(points), io.output);
  } else {
    std::vector<nlohmann::ordered_json> records;
    records.reserve(points.size());
    for (const auto& point : points) {
      records.push_back(curve_record(point, params, seed));
    }
    emit(to_jsonl(records), io.output);
  }
}

void cmd_subsets(const ParamFlags& pf, const SplitFlags& sf, const IoFlags& io,
                 std::uint64_t seed, const std::string& sets_flag,
                 const EvalOptions& options) {
  const TtssParams params = make_params(pf);
  const SplitSpec split = make_split(sf, seed);
  const auto sets = parse_index_sets(sets_flag);
  const Dataset data = load_input(io);
  const std::vector<SubsetResult> results =
      feature_subset_eval(data, sets, split, params, options);
  if (io.table) {
    emit(subsets_table(results), io.output);
  } else {
    std::vector<nlohmann::ordered_json> records;
    records.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      auto record = eval_record(results[i].report);
      record["rank"] = i + 1;
      records.push_back(std::move(record));
    }
    emit(to_jsonl(records), io.output);
  }
}

void cmd_synth(std::size_t n_per_class, std::size_t n_features,
               double separation, std::uint64_t seed,
               const std::string& output) {
  const Dataset data = generate_synthetic(n_per_class, n_features, separation,
                                          seed);
  emit(dataset_to_csv(data), output);
}

void cmd_trajectory(const ParamFlags& pf, std::size_t steps,
                    const std::string& output) {
  const GlsNeuron neuron(map_variant_from_string(pf.map), pf.b);
  const Trajectory trajectory = iterate(neuron, pf.q, steps);
  std::string out;
  for (double x : trajectory) out += format_double(x) + '\n';
  emit(out, output);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ChaosNet: chaos-inspired classification via GLS neurons and "
               "TT-SS features"};
  app.require_subcommand(1);

  ParamFlags pf;
  SplitFlags sf;
  IoFlags io;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::size_t repeats = 10;
  bool strict_normalization = false;
  std::string model_path;
  std::string features_flag;
  std::string sets_flag;
  std::string m_flag = "1,5,10,20";
  std::string b_grid = "0.1:0.9:0.1";
  std::string q_grid = "0.499";
  std::string eps_grid = "0.01:0.1:0.01";
  bool no_normalize = false;
  std::size_t synth_per_class = 100;
  std::size_t synth_features = 9;
  double synth_separation = 0.4;
  std::size_t trajectory_steps = 10;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "base seed for every random choice")
        ->capture_default_str();
    sub->add_option("--threads", threads,
                    "worker threads for feature extraction (0 = all cores)")
        ->envname("CHAOSNET_THREADS")
        ->capture_default_str();
    sub->add_option("--output", io.output, "write results to this file "
                                           "(default: stdout)");
  };
  const auto add_eval_common = [&](CLI::App* sub) {
    add_common(sub);
    add_param_flags(sub, pf);
    add_split_flags(sub, sf);
    add_input_flags(sub, io);
    sub->add_flag("--table", io.table, "human-readable table instead of JSONL");
    sub->add_flag("--strict-normalization", strict_normalization,
                  "scale with train-set statistics only (test clamped to "
                  "[0,1]) instead of whole-dataset statistics");
  };
  const auto eval_options = [&]() {
    EvalOptions options;
    options.normalization = strict_normalization ? NormalizationMode::TrainOnly
                                                 : NormalizationMode::FullDataset;
    options.threads = resolve_threads(threads);
    return options;
  };

  auto* extract = app.add_subcommand(
      "extract", "TT-SS features of a normalized dataset, as CSV");
  add_common(extract);
  add_param_flags(extract, pf);
  add_input_flags(extract, io);
  extract->callback(
      [&] { cmd_extract(pf, io, resolve_threads(threads)); });

  auto* train = app.add_subcommand(
      "train", "fit mean representation vectors and save the model");
  add_common(train);
  add_param_flags(train, pf);
  add_input_flags(train, io);
  train->add_option("--model", model_path, "model file to write")->required();
  train->callback(
      [&] { cmd_train(pf, io, model_path, resolve_threads(threads)); });

  auto* predict_cmd = app.add_subcommand(
      "predict", "classify rows with a saved model, as CSV");
  add_common(predict_cmd);
  add_input_flags(predict_cmd, io);
  predict_cmd->add_option("--model", model_path, "model file to read")
      ->required();
  predict_cmd->add_flag(
      "--no-normalize", no_normalize,
      "feed raw values to the maps (input must already lie in [0,1])");
  predict_cmd->callback(
      [&] { cmd_predict(io, model_path, no_normalize, resolve_threads(threads)); });

  auto* evaluate = app.add_subcommand(
      "evaluate", "split, train, and score once; report as JSONL or table");
  add_eval_common(evaluate);
  evaluate->add_option("--features", features_flag,
                       "evaluate this 1-based feature subset, e.g. 1,5,7,8,9");
  evaluate->callback([&] {
    cmd_evaluate(pf, sf, io, seed, features_flag, eval_options());
  });

  auto* tune = app.add_subcommand(
      "tune", "grid-search b, q, epsilon by mean accuracy over repeats");
  add_eval_common(tune);
  tune->add_option("--repeats", repeats, "reseeded evaluations per grid point")
      ->capture_default_str();
  tune->add_option("--b-grid", b_grid, "b values (start:stop:step or list)")
      ->capture_default_str();
  tune->add_option("--q-grid", q_grid, "q values (start:stop:step or list)")
      ->capture_default_str();
  tune->add_option("--eps-grid", eps_grid,
                   "epsilon values (start:stop:step or list)")
      ->capture_default_str();
  tune->callback([&] {
    cmd_tune(pf, sf, io, seed, repeats, b_grid, q_grid, eps_grid,
             eval_options());
  });

  auto* curve = app.add_subcommand(
      "curve", "learning curve over training instances per class");
  add_common(curve);
  add_param_flags(curve, pf);
  add_input_flags(curve, io);
  curve->add_flag("--table", io.table, "human-readable table instead of JSONL");
  curve->add_flag("--strict-normalization", strict_normalization,
                  "scale with train-set statistics only");
  curve->add_option("--repeats", repeats, "random splits per m value")
      ->capture_default_str();
  curve->add_option("--m-values", m_flag, "training rows per class, e.g. "
                                          "1,5,10,20")
      ->capture_default_str();
  curve->callback(
      [&] { cmd_curve(pf, io, seed, repeats, m_flag, eval_options()); });

  auto* subsets = app.add_subcommand(
      "subsets", "rank feature subsets by evaluation accuracy");
  add_eval_common(subsets);
  subsets->add_option("--sets", sets_flag,
                      "semicolon-separated 1-based subsets, e.g. "
                      "\"1,5,7,8,9;2,3\"")
      ->required();
  subsets->callback(
      [&] { cmd_subsets(pf, sf, io, seed, sets_flag, eval_options()); });

  auto* synth = app.add_subcommand(
      "synth", "two-class synthetic dataset with separated supports, as CSV");
  add_common(synth);
  synth->add_option("--n-per-class", synth_per_class, "rows per class")
      ->capture_default_str();
  synth->add_option("--n-features", synth_features, "feature columns")
      ->capture_default_str();
  synth->add_option("--separation", synth_separation,
                    "gap between class supports, in [0,1)")
      ->capture_default_str();
  synth->callback([&] {
    cmd_synth(synth_per_class, synth_features, synth_separation, seed,
              io.output);
  });

  auto* trajectory = app.add_subcommand(
      "trajectory", "print the activity trajectory A(0..steps) from q");
  add_common(trajectory);
  add_param_flags(trajectory, pf);
  trajectory->add_option("--steps", trajectory_steps, "iterations to print")
      ->capture_default_str();
  trajectory->callback(
      [&] { cmd_trajectory(pf, trajectory_steps, io.output); });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "chaosnet: " << e.what() << '\n';
    return 1;
  } catch (const NonConvergenceError& e) {
    std::cerr << "chaosnet: " << e.what() << '\n';
    return 3;
  } catch (const chaosnet::ParseError& e) {
    std::cerr << "chaosnet: " << e.what();
    if (e.row()) {
      std::cerr << " (line " << *e.row();
      if (e.col()) std::cerr << ", column " << *e.col();
      std::cerr << ')';
    }
    std::cerr << '\n';
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "chaosnet: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "chaosnet: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "chaosnet: " << e.what() << '\n';
    return 2;
  }
}
