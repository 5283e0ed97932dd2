// Python extension module. Structured values cross the boundary as JSON
// strings in the canonical encodings (see include/fairagg/json_io.hpp); the
// fairagg Python package wraps these with dict-based helpers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fairagg/accuracy.hpp"
#include "fairagg/compas.hpp"
#include "fairagg/fairness.hpp"

namespace py = pybind11;
using namespace fairagg;

namespace {

json parse_document(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string(what) + ": " + e.what());
  }
}

LogZeroPolicy policy_of(bool log_floor) {
  return log_floor ? LogZeroPolicy::Floor : LogZeroPolicy::Fail;
}

EstimatedModel model_of(const std::string& estimator,
                        const PredictionStream& stream) {
  if (estimator == "mle") {
    return empirical_mle_estimator(stream);
  }
  if (estimator == "compas-decile") {
    return compas_decile_estimator(stream);
  }
  throw DomainError("unknown estimator: " + estimator);
}

FilterSpec filter_of(const std::string& name, bool skip_bad_rows) {
  FilterSpec filter;
  if (name == "propublica") {
    filter = FilterSpec::propublica();
  } else if (name != "none") {
    throw DomainError("unknown filter preset: " + name);
  }
  filter.skip_bad_rows = skip_bad_rows;
  return filter;
}

std::map<std::string, UtilitySpec> utilities_of(const std::string& utilities_json) {
  const json doc = parse_document(utilities_json, "utilities");
  std::map<std::string, UtilitySpec> utilities;
  for (const auto& [id, uj] : doc.items()) {
    utilities.emplace(id, utility_spec_from_json(uj));
  }
  return utilities;
}

json sweep_to_json(const SweepResult& sweep, bool with_grid) {
  json out;
  out["measures"] = sweep.measure_ids;
  out["resolution"] = sweep.resolution;
  out["grid_points"] = sweep.points.size();
  out["argmax_weights"] = sweep.argmax().weights;
  out["argmax_value"] = sweep.argmax().value;
  out["corner_limits"] = sweep.corner_limits;
  if (with_grid) {
    std::ostringstream csv;
    write_sweep_csv(sweep, csv);
    out["csv"] = csv.str();
    out["svg"] = sweep.measure_ids.size() == 3 ? json(sweep_ternary_svg(sweep))
                                               : json(nullptr);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_fairagg, m) {
  m.doc() =
      "Accuracy and fairness evaluation of probabilistic prediction "
      "algorithms: strictly proper scoring rules, group false-negative "
      "rates, and weighted utility aggregation.";

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<DomainError>(m, "DomainError", base);
  py::register_exception<SchemaError>(m, "SchemaError", base);
  py::register_exception<RowError>(m, "RowError", base);
  py::register_exception<ZeroProbabilityError>(m, "ZeroProbabilityError", base);
  py::register_exception<EmptyPositiveClassError>(m, "EmptyPositiveClassError",
                                                  base);
  py::register_exception<UnsupportedMeasureError>(m, "UnsupportedMeasureError",
                                                  base);
  py::register_exception<UtilityUndefinedError>(m, "UtilityUndefinedError",
                                                base);

  m.def(
      "score_distribution",
      [](const std::vector<std::string>& labels, const std::vector<double>& probs,
         const std::string& truth, const std::string& rule, bool log_floor) {
        const auto space = make_space(labels);
        const OutcomeDistribution dist(space, probs);
        return score(scoring_rule_from_name(rule), dist, truth,
                     policy_of(log_floor));
      },
      py::arg("labels"), py::arg("probs"), py::arg("truth"), py::arg("rule"),
      py::arg("log_floor") = false,
      "Score one predicted distribution against an observed outcome.");

  m.def(
      "check_propriety",
      [](const std::string& rule, const std::vector<std::string>& labels,
         double grid_step) {
        const auto space = make_space(labels);
        const auto result =
            check_strict_propriety(scoring_rule_from_name(rule), *space, grid_step);
        py::dict out;
        out["is_proper"] = result.is_proper;
        out["worst_violation"] = result.worst_violation;
        return out;
      },
      py::arg("rule"), py::arg("labels"), py::arg("grid_step") = 0.05,
      "Brute-force strict-propriety check over a probability grid.");

  m.def("compas_decile_probability", &compas_decile_probability,
        py::arg("decile"),
        "Recidivism probability for an integer decile score in [0, 10].");

  m.def(
      "estimated_accuracy_json",
      [](const std::string& stream_json, const std::string& estimator,
         const std::string& rule, bool log_floor) {
        const auto stream = prediction_stream_from_json(
            parse_document(stream_json, "prediction stream"));
        return estimated_accuracy(scoring_rule_from_name(rule),
                                  model_of(estimator, stream),
                                  stream.ground_truth(),
                                  uniform_input_distribution(stream),
                                  policy_of(log_floor));
      },
      py::arg("stream_json"), py::arg("estimator"), py::arg("rule"),
      py::arg("log_floor") = false,
      "Uniform-weight estimated accuracy of a prediction-stream document.");

  m.def(
      "group_fnr_json",
      [](const std::string& stream_json, const std::string& partition_json,
         const std::string& estimator, const std::string& group) {
        const auto stream = prediction_stream_from_json(
            parse_document(stream_json, "prediction stream"));
        const auto partition = group_partition_from_json(
            parse_document(partition_json, "group partition"));
        return group_fnr(model_of(estimator, stream), stream.ground_truth(),
                         uniform_input_distribution(stream), partition, group);
      },
      py::arg("stream_json"), py::arg("partition_json"), py::arg("estimator"),
      py::arg("group"), "One group's false negative rate.");

  m.def(
      "eq_opp_json",
      [](const std::string& stream_json, const std::string& partition_json,
         const std::string& estimator) {
        const auto stream = prediction_stream_from_json(
            parse_document(stream_json, "prediction stream"));
        const auto partition = group_partition_from_json(
            parse_document(partition_json, "group partition"));
        return eq_opp(model_of(estimator, stream), stream.ground_truth(),
                      uniform_input_distribution(stream), partition);
      },
      py::arg("stream_json"), py::arg("partition_json"), py::arg("estimator"),
      "Negated absolute gap between the two groups' false negative rates.");

  m.def(
      "overall_json",
      [](const std::string& values_json, const std::string& spec_json) {
        return overall(
            aggregation_spec_from_json(parse_document(spec_json, "aggregation spec")),
            measure_vector_from_json(parse_document(values_json, "measure vector")));
      },
      py::arg("values_json"), py::arg("spec_json"),
      "Alpha plus the weighted sum of per-measure utilities.");

  m.def(
      "simplex_sweep_json",
      [](const std::string& values_json, const std::string& utilities_json,
         std::size_t resolution, bool with_grid) {
        const auto sweep = simplex_sweep(
            measure_vector_from_json(parse_document(values_json, "measure vector")),
            utilities_of(utilities_json), resolution);
        return sweep_to_json(sweep, with_grid).dump();
      },
      py::arg("values_json"), py::arg("utilities_json"),
      py::arg("resolution") = 100, py::arg("with_grid") = false,
      "Overall across the positive weight simplex; returns a JSON summary, "
      "optionally carrying the grid CSV and ternary SVG.");

  m.def(
      "audit_text_json",
      [](const std::string& csv_text, const std::string& filter,
         bool skip_bad_rows, std::size_t resolution) {
        const auto data = load_compas_text(csv_text, filter_of(filter, skip_bad_rows));
        AuditConfig config;
        config.sweep_resolution = resolution;
        auto report = run_audit(data.stream, data.partition, config);
        report.load = data.report;
        return audit_report_text(report);
      },
      py::arg("csv_text"), py::arg("filter") = "none",
      py::arg("skip_bad_rows") = false, py::arg("resolution") = 100,
      "Full audit of recidivism CSV text; returns the report JSON document.");

  m.def(
      "audit_file_json",
      [](const std::string& path, const std::string& filter, bool skip_bad_rows,
         const std::string& out_dir, bool write_svg, std::size_t resolution) {
        AuditConfig config;
        config.sweep_resolution = resolution;
        config.out_dir = out_dir;
        config.write_svg = write_svg;
        return audit_report_text(
            run_audit_file(path, filter_of(filter, skip_bad_rows), config));
      },
      py::arg("path"), py::arg("filter") = "none",
      py::arg("skip_bad_rows") = false, py::arg("out_dir") = "",
      py::arg("write_svg") = true, py::arg("resolution") = 100,
      "Full audit of a recidivism CSV file; returns the report JSON document.");
}
