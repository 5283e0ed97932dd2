// Command-line front end: scoring, fairness, aggregation, weight sweeps, and
// the one-shot recidivism audit. Exit codes follow sysexits conventions where
// they apply: 0 success, 2 data error, 64 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairagg/accuracy.hpp"
#include "fairagg/compas.hpp"
#include "fairagg/fairness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 2;
constexpr int kExitUsage = 64;

/// Flag-level problems detected after CLI11 parsing (bad --values syntax,
/// weight count mismatches, and so on). Reported as usage errors.
struct UsageError {
  std::string message;
};

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw fairagg::SchemaError("cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fairagg::json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return fairagg::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw fairagg::SchemaError("invalid JSON in " + path + ": " + e.what());
  }
}

void emit_json(const fairagg::json& j) { std::cout << j.dump(2) << "\n"; }

std::string fixed6(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

double parse_strict_double(const std::string& text, const std::string& what) {
  try {
    std::size_t consumed = 0;
    const double value = std::stod(text, &consumed);
    if (consumed != text.size() || !std::isfinite(value)) {
      throw UsageError{what + " is not a finite number: " + text};
    }
    return value;
  } catch (const std::logic_error&) {
    throw UsageError{what + " is not a finite number: " + text};
  }
}

std::vector<std::string> split_on_commas(const std::string& text) {
  std::vector<std::string> tokens;
  std::string token;
  std::istringstream stream(text);
  while (std::getline(stream, token, ',')) {
    tokens.push_back(token);
  }
  return tokens;
}

/// "--values brier=-0.459,log=-0.740,eqopp=-0.145" in listed order. The
/// accuracy/fairness split does not affect aggregation, so every entry is
/// counted on the accuracy side.
fairagg::MeasureVector parse_measure_values(const std::string& text) {
  std::vector<fairagg::MeasureEntry> entries;
  for (const std::string& token : split_on_commas(text)) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError{"--values entries must look like id=number: " + token};
    }
    const std::string id = token.substr(0, eq);
    for (const auto& entry : entries) {
      if (entry.measure_id == id) {
        throw UsageError{"--values repeats measure id: " + id};
      }
    }
    entries.push_back(
        {id, parse_strict_double(token.substr(eq + 1), "value of " + id)});
  }
  if (entries.empty()) {
    throw UsageError{"--values must list at least one id=number entry"};
  }
  return fairagg::MeasureVector(std::move(entries), entries.size(), 0);
}

/// Human-typed weights: must sum to 1 within 1e-6, then are renormalized by
/// exact division so downstream simplex checks see a clean total.
std::vector<double> parse_weights(const std::string& text, std::size_t expected) {
  const auto tokens = split_on_commas(text);
  if (tokens.size() != expected) {
    throw UsageError{"--weights lists " + std::to_string(tokens.size()) +
                     " entries but --values lists " + std::to_string(expected)};
  }
  std::vector<double> weights;
  double sum = 0.0;
  for (const auto& token : tokens) {
    weights.push_back(parse_strict_double(token, "weight"));
    sum += weights.back();
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw UsageError{"--weights must sum to 1 within 1e-6 (got " +
                     std::to_string(sum) + ")"};
  }
  if (sum != 1.0) {
    std::cerr << "warning: weights sum to " << sum << "; renormalizing\n";
    for (double& w : weights) {
      w /= sum;
    }
  }
  return weights;
}

/// One utility name for every measure, with per-measure overrides spelled
/// "measure=name".
std::map<std::string, fairagg::UtilitySpec> build_utilities(
    const std::vector<std::string>& measure_ids, const std::string& base_name,
    const std::vector<std::string>& overrides) {
  std::map<std::string, fairagg::UtilitySpec> utilities;
  for (const auto& id : measure_ids) {
    utilities.emplace(id, fairagg::UtilitySpec::from_name(base_name));
  }
  for (const auto& token : overrides) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError{"--utility-for entries must look like measure=name: " +
                       token};
    }
    const std::string id = token.substr(0, eq);
    const std::string name = token.substr(eq + 1);
    auto it = utilities.find(id);
    if (it == utilities.end()) {
      throw UsageError{"--utility-for names a measure absent from --values: " +
                       id};
    }
    try {
      it->second = fairagg::UtilitySpec::from_name(name);
    } catch (const fairagg::DomainError& e) {
      throw UsageError{e.what()};
    }
  }
  return utilities;
}

/// Inputs shared by `score` and `fairness`: either a recidivism CSV (which
/// also yields the race partition) or a prediction-stream JSON file.
struct LoadedInputs {
  fairagg::PredictionStream stream;
  std::optional<fairagg::GroupPartition> partition;
};

struct SourceOpts {
  std::string data_path;
  std::string stream_path;
  std::string partition_path;
  std::string filter = "none";
  bool skip_bad_rows = false;
};

fairagg::FilterSpec filter_from_opts(const SourceOpts& opts) {
  fairagg::FilterSpec filter;
  if (opts.filter == "propublica") {
    filter = fairagg::FilterSpec::propublica();
  }
  filter.skip_bad_rows = opts.skip_bad_rows;
  return filter;
}

LoadedInputs load_inputs(const SourceOpts& opts) {
  if (!opts.data_path.empty()) {
    auto data = fairagg::load_compas_csv(opts.data_path, filter_from_opts(opts));
    return {std::move(data.stream), std::move(data.partition)};
  }
  if (opts.stream_path.empty()) {
    throw UsageError{"one of --data or --stream is required"};
  }
  auto stream =
      fairagg::prediction_stream_from_json(parse_json_file(opts.stream_path));
  std::optional<fairagg::GroupPartition> partition;
  if (!opts.partition_path.empty()) {
    partition = fairagg::group_partition_from_json(
        parse_json_file(opts.partition_path));
  }
  return {std::move(stream), std::move(partition)};
}

fairagg::EstimatedModel build_model(const std::string& estimator,
                                    const fairagg::PredictionStream& stream) {
  if (estimator == "mle") {
    return fairagg::empirical_mle_estimator(stream);
  }
  return fairagg::compas_decile_estimator(stream);
}

// ---------------------------------------------------------------------------
// score

struct ScoreOpts {
  SourceOpts source;
  std::string estimator = "compas-decile";
  std::string rule;
  bool log_floor = false;
  std::string format = "json";
};

int run_score(const ScoreOpts& opts) {
  const auto inputs = load_inputs(opts.source);
  const auto model = build_model(opts.estimator, inputs.stream);
  const auto rule = fairagg::scoring_rule_from_name(opts.rule);
  const auto policy = opts.log_floor ? fairagg::LogZeroPolicy::Floor
                                     : fairagg::LogZeroPolicy::Fail;
  const double value = fairagg::estimated_accuracy(
      rule, model, inputs.stream.ground_truth(),
      fairagg::uniform_input_distribution(inputs.stream), policy);
  const std::size_t n = inputs.stream.records().size();
  if (opts.format == "csv") {
    std::cout << "rule,estimator,n_records,value\n"
              << opts.rule << "," << opts.estimator << "," << n << ","
              << fixed6(value) << "\n";
  } else {
    fairagg::json out;
    out["rule"] = opts.rule;
    out["estimator"] = opts.estimator;
    out["n_records"] = n;
    out["value"] = value;
    emit_json(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// fairness

struct FairnessOpts {
  SourceOpts source;
  std::string estimator = "compas-decile";
  std::string measure = "eqopp";
  std::string format = "json";
};

int run_fairness(const FairnessOpts& opts) {
  const auto inputs = load_inputs(opts.source);
  if (!inputs.partition.has_value()) {
    throw UsageError{"--stream inputs need --partition for fairness measures"};
  }
  const auto& partition = *inputs.partition;
  const auto model = build_model(opts.estimator, inputs.stream);
  const auto truth = inputs.stream.ground_truth();
  const auto p = fairagg::uniform_input_distribution(inputs.stream);
  const fairagg::FairnessMeasureSpec spec{opts.measure, partition, std::nullopt};
  const double value = fairagg::evaluate_fairness(spec, model, truth, p);
  const double fnr_a =
      fairagg::group_fnr(model, truth, p, partition, partition.group_a());
  const double fnr_b =
      fairagg::group_fnr(model, truth, p, partition, partition.group_b());
  const std::size_t n = inputs.stream.records().size();
  if (opts.format == "csv") {
    std::cout << "measure,group_a,group_b,fnr_a,fnr_b,value\n"
              << opts.measure << "," << partition.group_a() << ","
              << partition.group_b() << "," << fixed6(fnr_a) << ","
              << fixed6(fnr_b) << "," << fixed6(value) << "\n";
  } else {
    fairagg::json out;
    out["measure"] = opts.measure;
    out["group_a"] = partition.group_a();
    out["group_b"] = partition.group_b();
    out["fnr_a"] = fnr_a;
    out["fnr_b"] = fnr_b;
    out["value"] = value;
    out["n_records"] = n;
    emit_json(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// aggregate

struct AggregateOpts {
  std::string values;
  std::string weights;
  std::string utility = "reciprocal-abs";
  std::vector<std::string> utility_for;
  double alpha = 0.0;
  std::string format = "json";
};

int run_aggregate(const AggregateOpts& opts) {
  const auto vector = parse_measure_values(opts.values);
  const auto ids = vector.measure_ids();
  const auto weight_list = parse_weights(opts.weights, ids.size());
  std::map<std::string, double> weights;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    weights.emplace(ids[i], weight_list[i]);
  }
  const auto utilities = build_utilities(ids, opts.utility, opts.utility_for);
  const fairagg::AggregationSpec spec(opts.alpha, weights, utilities);
  const double value = fairagg::overall(spec, vector);
  if (opts.format == "csv") {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::cout << "w_" << ids[i] << ",";
    }
    std::cout << "overall\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
      std::cout << fixed6(weight_list[i]) << ",";
    }
    std::cout << fixed6(value) << "\n";
  } else {
    fairagg::json out;
    out["alpha"] = opts.alpha;
    out["measures"] = ids;
    fairagg::json values_obj, weights_obj, utility_names, utility_values;
    for (const auto& id : ids) {
      values_obj[id] = vector.value_of(id);
      weights_obj[id] = weights.at(id);
      utility_names[id] = fairagg::to_string(utilities.at(id).kind());
      utility_values[id] =
          fairagg::utility_eval(utilities.at(id), vector.value_of(id));
    }
    out["values"] = values_obj;
    out["weights"] = weights_obj;
    out["utilities"] = utility_names;
    out["utility_values"] = utility_values;
    out["overall"] = value;
    emit_json(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOpts {
  std::string values;
  std::string utility = "reciprocal-abs";
  std::vector<std::string> utility_for;
  std::size_t resolution = 100;
  std::string out_dir;
  bool no_svg = false;
  std::string format = "json";
};

fairagg::json sweep_summary_json(const fairagg::SweepResult& sweep) {
  fairagg::json out;
  out["measures"] = sweep.measure_ids;
  out["resolution"] = sweep.resolution;
  out["grid_points"] = sweep.points.size();
  out["argmax_weights"] = sweep.argmax().weights;
  out["argmax_value"] = sweep.argmax().value;
  out["corner_limits"] = sweep.corner_limits;
  return out;
}

int run_sweep(const SweepOpts& opts) {
  const auto vector = parse_measure_values(opts.values);
  const auto ids = vector.measure_ids();
  if (opts.resolution < ids.size()) {
    throw UsageError{"--resolution must be at least the number of measures"};
  }
  const auto utilities = build_utilities(ids, opts.utility, opts.utility_for);
  const auto sweep = fairagg::simplex_sweep(vector, utilities, opts.resolution);

  std::vector<std::string> artifacts;
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
    const auto csv_path = std::filesystem::path(opts.out_dir) / "sweep.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
      throw fairagg::SchemaError("cannot write file: " + csv_path.string());
    }
    fairagg::write_sweep_csv(sweep, csv);
    artifacts.push_back("sweep.csv");
    if (!opts.no_svg && ids.size() == 3) {
      const auto svg_path = std::filesystem::path(opts.out_dir) / "sweep.svg";
      std::ofstream svg(svg_path, std::ios::binary);
      if (!svg) {
        throw fairagg::SchemaError("cannot write file: " + svg_path.string());
      }
      svg << fairagg::sweep_ternary_svg(sweep);
      artifacts.push_back("sweep.svg");
    }
  }

  if (opts.format == "csv") {
    fairagg::write_sweep_csv(sweep, std::cout);
  } else {
    fairagg::json out = sweep_summary_json(sweep);
    out["artifacts"] = artifacts;
    emit_json(out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// audit-compas

struct AuditOpts {
  std::string data_path;
  std::string filter = "none";
  bool skip_bad_rows = false;
  std::string out_dir;
  std::size_t resolution = 100;
  bool no_svg = false;
};

int run_audit_cmd(const AuditOpts& opts) {
  SourceOpts source;
  source.filter = opts.filter;
  source.skip_bad_rows = opts.skip_bad_rows;
  fairagg::AuditConfig config;
  config.sweep_resolution = opts.resolution;
  config.out_dir = opts.out_dir;
  config.write_svg = !opts.no_svg;
  if (!opts.out_dir.empty()) {
    std::filesystem::create_directories(opts.out_dir);
  }
  const auto report = fairagg::run_audit_file(opts.data_path,
                                              filter_from_opts(source), config);
  std::cout << fairagg::audit_report_text(report);
  return kExitOk;
}

void add_source_flags(CLI::App* cmd, SourceOpts* source, bool with_stream) {
  auto* data = cmd->add_option("--data", source->data_path,
                               "Recidivism-format CSV file");
  if (with_stream) {
    auto* stream = cmd->add_option("--stream", source->stream_path,
                                   "Prediction-stream JSON file");
    stream->excludes(data);
    data->excludes(stream);
  }
  cmd->add_option("--filter", source->filter, "Row filter preset")
      ->check(CLI::IsMember({"none", "propublica"}))
      ->capture_default_str();
  cmd->add_flag("--skip-bad-rows", source->skip_bad_rows,
                "Drop malformed CSV rows instead of failing");
}

void add_format_flag(CLI::App* cmd, std::string* format) {
  cmd->add_option("--format", *format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Evaluates probabilistic prediction algorithms: proper-scoring-rule "
      "accuracy, group fairness, and weighted utility aggregation."};
  app.require_subcommand(1);

  ScoreOpts score;
  auto* score_cmd = app.add_subcommand(
      "score", "Estimated accuracy of a prediction stream under a scoring rule");
  add_source_flags(score_cmd, &score.source, /*with_stream=*/true);
  score_cmd->add_option("--estimator", score.estimator, "Estimation function")
      ->check(CLI::IsMember({"mle", "compas-decile"}))
      ->capture_default_str();
  score_cmd->add_option("--rule", score.rule, "Scoring rule")
      ->check(CLI::IsMember({"brier", "log", "spherical"}))
      ->required();
  score_cmd->add_flag("--log-floor", score.log_floor,
                      "Floor zero probabilities at 1e-10 for the log rule");
  add_format_flag(score_cmd, &score.format);

  FairnessOpts fairness;
  auto* fairness_cmd = app.add_subcommand(
      "fairness", "Group fairness of a prediction stream");
  add_source_flags(fairness_cmd, &fairness.source, /*with_stream=*/true);
  fairness_cmd
      ->add_option("--partition", fairness.source.partition_path,
                   "Group-partition JSON file (required with --stream)")
      ->needs(fairness_cmd->get_option("--stream"));
  fairness_cmd
      ->add_option("--estimator", fairness.estimator, "Estimation function")
      ->check(CLI::IsMember({"mle", "compas-decile"}))
      ->capture_default_str();
  fairness_cmd->add_option("--measure", fairness.measure, "Fairness measure")
      ->check(CLI::IsMember({"eqopp"}))
      ->capture_default_str();
  add_format_flag(fairness_cmd, &fairness.format);

  AggregateOpts aggregate;
  auto* aggregate_cmd = app.add_subcommand(
      "aggregate", "Overall value of a measure vector under weights and utilities");
  aggregate_cmd
      ->add_option("--values", aggregate.values,
                   "Measure values, e.g. brier=-0.459,log=-0.740,eqopp=-0.145")
      ->required();
  aggregate_cmd
      ->add_option("--weights", aggregate.weights,
                   "Comma-separated weights, one per measure, summing to 1")
      ->required();
  aggregate_cmd
      ->add_option("--utility", aggregate.utility, "Utility applied to every measure")
      ->check(CLI::IsMember({"linear", "reciprocal-abs", "log-reciprocal-abs"}))
      ->capture_default_str();
  aggregate_cmd->add_option("--utility-for", aggregate.utility_for,
                            "Per-measure utility override, e.g. eqopp=log-reciprocal-abs");
  aggregate_cmd->add_option("--alpha", aggregate.alpha, "Additive constant")
      ->capture_default_str();
  add_format_flag(aggregate_cmd, &aggregate.format);

  SweepOpts sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Overall value across the positive weight simplex");
  sweep_cmd
      ->add_option("--values", sweep.values,
                   "Measure values, e.g. brier=-0.459,log=-0.740,eqopp=-0.145")
      ->required();
  sweep_cmd->add_option("--utility", sweep.utility, "Utility applied to every measure")
      ->check(CLI::IsMember({"linear", "reciprocal-abs", "log-reciprocal-abs"}))
      ->capture_default_str();
  sweep_cmd->add_option("--utility-for", sweep.utility_for,
                        "Per-measure utility override, e.g. eqopp=log-reciprocal-abs");
  sweep_cmd->add_option("--resolution", sweep.resolution, "Weight grid denominator")
      ->capture_default_str();
  sweep_cmd->add_option("--out-dir", sweep.out_dir,
                        "Directory for sweep.csv (and sweep.svg for 3 measures)");
  sweep_cmd->add_flag("--no-svg", sweep.no_svg, "Skip the SVG artifact");
  add_format_flag(sweep_cmd, &sweep.format);

  AuditOpts audit;
  auto* audit_cmd = app.add_subcommand(
      "audit-compas", "End-to-end recidivism audit of a COMPAS-format CSV");
  audit_cmd->add_option("--data", audit.data_path, "Recidivism-format CSV file")
      ->required();
  audit_cmd->add_option("--filter", audit.filter, "Row filter preset")
      ->check(CLI::IsMember({"none", "propublica"}))
      ->capture_default_str();
  audit_cmd->add_flag("--skip-bad-rows", audit.skip_bad_rows,
                      "Drop malformed CSV rows instead of failing");
  audit_cmd->add_option("--out-dir", audit.out_dir, "Directory for sweep artifacts");
  audit_cmd->add_option("--resolution", audit.resolution, "Weight grid denominator")
      ->capture_default_str();
  audit_cmd->add_flag("--no-svg", audit.no_svg, "Skip the SVG artifacts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score_cmd->parsed()) {
      return run_score(score);
    }
    if (fairness_cmd->parsed()) {
      return run_fairness(fairness);
    }
    if (aggregate_cmd->parsed()) {
      return run_aggregate(aggregate);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(sweep);
    }
    return run_audit_cmd(audit);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.message << "\n";
    return kExitUsage;
  } catch (const fairagg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
