#include "fairagg/compas.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string_view>

#include "fairagg/accuracy.hpp"
#include "fairagg/estimation.hpp"
#include "fairagg/fairness.hpp"
#include "fairagg/scoring.hpp"

namespace fairagg {

FilterSpec FilterSpec::propublica() {
  FilterSpec filter;
  filter.screening_window = true;
  filter.require_recid_flag = true;
  filter.exclude_traffic = true;
  filter.require_score_text = true;
  return filter;
}

std::size_t LoadReport::removed_total() const {
  std::size_t total = 0;
  for (const auto& [rule, count] : removed_by_rule) {
    total += count;
  }
  return total;
}

namespace {

// Splits CSV text into rows of fields. Quoted fields may contain commas,
// newlines, and doubled quotes; CRLF line endings are accepted; blank lines
// are dropped.
std::vector<std::vector<std::string>> parse_csv(const std::string& text,
                                                const std::string& source) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (row.size() > 1 || row_has_content || !row.front().empty()) {
      rows.push_back(std::move(row));
    }
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        end_field();
        row_has_content = true;
        break;
      case '\n':
        end_row();
        break;
      case '\r':
        break;  // part of a CRLF line ending
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) {
    throw SchemaError(source + ": unterminated quoted field");
  }
  if (!field.empty() || !row.empty() || row_has_content) {
    end_row();
  }
  return rows;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<long> parse_int(std::string_view s) {
  if (s.empty()) {
    return std::nullopt;
  }
  long value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    return std::nullopt;
  }
  return value;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) {
    return std::nullopt;
  }
  const std::string buffer(s);
  char* end = nullptr;
  const double value = std::strtod(buffer.c_str(), &end);
  if (end != buffer.c_str() + buffer.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

CompasData load_compas_text(const std::string& text, const FilterSpec& filter,
                            const std::string& source_name) {
  const auto rows = parse_csv(text, source_name);
  if (rows.empty()) {
    throw SchemaError(source_name + ": empty file (no header row)");
  }

  std::vector<std::string> header = rows.front();
  if (!header.empty() && header.front().rfind("\xEF\xBB\xBF", 0) == 0) {
    header.front().erase(0, 3);  // UTF-8 byte-order mark
  }
  std::map<std::string, std::size_t, std::less<>> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    columns.emplace(trim(header[i]), i);  // first occurrence wins
  }

  std::vector<std::string> missing;
  auto require_column = [&](const char* name) -> std::size_t {
    const auto it = columns.find(name);
    if (it == columns.end()) {
      missing.push_back(name);
      return 0;
    }
    return it->second;
  };
  auto optional_column = [&](const char* name) -> std::optional<std::size_t> {
    const auto it = columns.find(name);
    if (it == columns.end()) {
      return std::nullopt;
    }
    return it->second;
  };

  const std::size_t col_decile = require_column("decile_score");
  const std::size_t col_race = require_column("race");
  const std::size_t col_recid = require_column("two_year_recid");
  const std::optional<std::size_t> col_id = optional_column("id");
  std::size_t col_days = 0, col_is_recid = 0, col_degree = 0, col_score_text = 0;
  if (filter.screening_window) {
    col_days = require_column("days_b_screening_arrest");
  }
  if (filter.require_recid_flag) {
    col_is_recid = require_column("is_recid");
  }
  if (filter.exclude_traffic) {
    col_degree = require_column("c_charge_degree");
  }
  if (filter.require_score_text) {
    col_score_text = require_column("score_text");
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& name : missing) {
      joined += joined.empty() ? name : ", " + name;
    }
    throw SchemaError(source_name + ": missing column(s): " + joined);
  }

  LoadReport report;
  std::size_t removed_window = 0, removed_flag = 0, removed_traffic = 0,
              removed_score_text = 0;
  std::vector<std::string> bad_details;

  std::vector<CompasRow> parsed_rows;
  std::vector<PredictionRecord> records;
  std::map<std::string, std::string> group_of;
  std::set<std::string> used_ids;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    ++report.raw_rows;
    const std::string ordinal = std::to_string(r);

    auto bad = [&](const std::string& why) {
      ++report.bad_rows;
      if (bad_details.size() < 5) {
        bad_details.push_back("data row " + ordinal + ": " + why);
      }
    };

    if (row.size() != header.size()) {
      bad("expected " + std::to_string(header.size()) + " fields, got " +
          std::to_string(row.size()));
      continue;
    }

    // Filters fire before field validation, so a row an enabled rule drops
    // is charged to that rule even when its other fields are malformed.
    if (filter.screening_window) {
      const auto days = parse_double(trim(row[col_days]));
      if (!days || std::abs(*days) > 30.0) {
        ++removed_window;
        continue;
      }
    }
    if (filter.require_recid_flag) {
      const auto flag = parse_int(trim(row[col_is_recid]));
      if (!flag || *flag == -1) {
        ++removed_flag;
        continue;
      }
    }
    if (filter.exclude_traffic && trim(row[col_degree]) == "O") {
      ++removed_traffic;
      continue;
    }
    if (filter.require_score_text) {
      const auto text_value = trim(row[col_score_text]);
      if (text_value.empty() || text_value == "N/A") {
        ++removed_score_text;
        continue;
      }
    }

    const auto decile = parse_int(trim(row[col_decile]));
    if (!decile || *decile < 0 || *decile > 10) {
      bad("decile_score '" + row[col_decile] + "' is not an integer in [0, 10]");
      continue;
    }
    const auto recid = parse_int(trim(row[col_recid]));
    if (!recid || (*recid != 0 && *recid != 1)) {
      bad("two_year_recid '" + row[col_recid] + "' is not 0 or 1");
      continue;
    }
    const std::string race{trim(row[col_race])};

    std::string row_id = ordinal;
    if (col_id) {
      const auto id_value = trim(row[*col_id]);
      if (!id_value.empty()) {
        row_id = std::string(id_value);
      }
    }
    std::string input_id = row_id;
    for (std::size_t k = 1; used_ids.count(input_id) > 0; ++k) {
      input_id = row_id + "#" + std::to_string(k);
    }
    used_ids.insert(input_id);

    const std::string group =
        race == "African-American" ? kBlackGroup : kNonBlackGroup;
    records.push_back({input_id, std::nullopt,
                       static_cast<double>(*decile),
                       *recid == 1 ? kRecidLabel : kNoRecidLabel, group});
    group_of.emplace(input_id, group);
    parsed_rows.push_back(
        {input_id, static_cast<int>(*decile), race, static_cast<int>(*recid)});
    ++report.kept;
  }

  if (report.raw_rows == 0) {
    throw SchemaError(source_name + ": no data rows");
  }
  if (report.bad_rows > 0 && !filter.skip_bad_rows) {
    std::string details;
    for (const auto& d : bad_details) {
      details += "; " + d;
    }
    if (report.bad_rows > bad_details.size()) {
      details += "; ...";
    }
    throw RowError(source_name + ": " + std::to_string(report.bad_rows) +
                       " unparseable row(s)" + details,
                   report.bad_rows);
  }

  if (filter.screening_window) {
    report.removed_by_rule.emplace_back("screening_window", removed_window);
  }
  if (filter.require_recid_flag) {
    report.removed_by_rule.emplace_back("require_recid_flag", removed_flag);
  }
  if (filter.exclude_traffic) {
    report.removed_by_rule.emplace_back("exclude_traffic", removed_traffic);
  }
  if (filter.require_score_text) {
    report.removed_by_rule.emplace_back("require_score_text", removed_score_text);
  }

  if (report.kept == 0) {
    throw SchemaError(source_name + ": no usable rows remain after filtering");
  }

  return CompasData{std::move(parsed_rows),
                    PredictionStream(make_space({kNoRecidLabel, kRecidLabel}),
                                     std::move(records)),
                    GroupPartition(std::move(group_of), kBlackGroup,
                                   kNonBlackGroup, kNoRecidLabel),
                    std::move(report)};
}

CompasData load_compas_csv(const std::string& path, const FilterSpec& filter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw SchemaError("cannot open " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw SchemaError("failed reading " + path);
  }
  return load_compas_text(buffer.str(), filter, path);
}

namespace {

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(std::string("audit stage '") + name + "': " + e.what());
  } catch (const std::exception& e) {
    throw Error(std::string("audit stage '") + name + "': " + e.what());
  }
}

std::string sweep_csv_text(const SweepResult& sweep) {
  std::ostringstream out;
  write_sweep_csv(sweep, out);
  return out.str();
}

}  // namespace

AuditReport run_audit(const PredictionStream& stream,
                      const GroupPartition& partition,
                      const AuditConfig& config) {
  if (stream.distinct_input_ids().size() != stream.size()) {
    throw DomainError(
        "run_audit requires one record per input id "
        "(load_compas_csv guarantees this)");
  }

  AuditReport report;
  report.n_records = stream.size();

  const EstimatedModel model =
      stage("estimation", [&] { return compas_decile_estimator(stream); });
  const std::map<std::string, std::string> truth = stream.ground_truth();
  const InputDistribution p = uniform_input_distribution(stream);

  stage("group accounting", [&] {
    std::size_t count_a = 0, count_b = 0;
    for (const auto& [id, unused] : truth) {
      const std::string& tag = partition.group_of_id(id);
      count_a += tag == partition.group_a();
      count_b += tag == partition.group_b();
    }
    report.group_sizes.emplace_back(partition.group_a(), count_a);
    report.group_sizes.emplace_back(partition.group_b(), count_b);
  });

  stage("accuracy", [&] {
    report.brier = estimated_accuracy(ScoringRule::Brier, model, truth, p);
    report.log = estimated_accuracy(ScoringRule::Logarithmic, model, truth, p);
  });

  stage("fairness", [&] {
    report.fnr_black = group_fnr(model, truth, p, partition, partition.group_a());
    report.fnr_nonblack =
        group_fnr(model, truth, p, partition, partition.group_b());
    report.eqopp = eq_opp(model, truth, p, partition);
  });

  const UtilitySpec reciprocal = UtilitySpec::reciprocal_abs();
  const UtilitySpec log_reciprocal = UtilitySpec::log_reciprocal_abs();
  auto add_utility = [&](const std::string& measure_id, const UtilitySpec& u,
                         double r) {
    UtilityReportEntry entry{measure_id, to_string(u.kind()), std::nullopt};
    try {
      entry.value = utility_eval(u, r);
    } catch (const UtilityUndefinedError&) {
      // measure sits exactly at its optimum; reported as null
    }
    report.utilities.push_back(std::move(entry));
  };
  add_utility("brier", reciprocal, report.brier);
  add_utility("log", reciprocal, report.log);
  add_utility("eqopp", reciprocal, report.eqopp);
  add_utility("eqopp", log_reciprocal, report.eqopp);

  const bool sweepable =
      report.brier != 0.0 && report.log != 0.0 && report.eqopp != 0.0;
  if (sweepable) {
    const MeasureVector v({{"brier", report.brier},
                           {"log", report.log},
                           {"eqopp", report.eqopp}},
                          2, 1);
    stage("sweep", [&] {
      report.sweep_reciprocal =
          simplex_sweep(v,
                        {{"brier", reciprocal},
                         {"log", reciprocal},
                         {"eqopp", reciprocal}},
                        config.sweep_resolution);
      report.sweep_log_eqopp =
          simplex_sweep(v,
                        {{"brier", reciprocal},
                         {"log", reciprocal},
                         {"eqopp", log_reciprocal}},
                        config.sweep_resolution);
    });
  }

  if (!config.out_dir.empty() && report.sweep_reciprocal) {
    stage("artifacts", [&] {
      namespace fs = std::filesystem;
      fs::create_directories(config.out_dir);
      auto write_text = [&](const std::string& name, const std::string& text) {
        const fs::path path = fs::path(config.out_dir) / name;
        std::ofstream out(path, std::ios::binary);
        out << text;
        if (!out) {
          throw Error("cannot write " + path.string());
        }
        report.artifacts.push_back(name);
      };
      write_text("sweep_reciprocal.csv", sweep_csv_text(*report.sweep_reciprocal));
      write_text("sweep_log_eqopp.csv", sweep_csv_text(*report.sweep_log_eqopp));
      if (config.write_svg) {
        write_text("sweep_reciprocal.svg",
                   sweep_ternary_svg(*report.sweep_reciprocal));
        write_text("sweep_log_eqopp.svg",
                   sweep_ternary_svg(*report.sweep_log_eqopp));
      }
    });
  }

  return report;
}

AuditReport run_audit_file(const std::string& path, const FilterSpec& filter,
                           const AuditConfig& config) {
  CompasData data = stage("load", [&] { return load_compas_csv(path, filter); });
  AuditReport report = run_audit(data.stream, data.partition, config);
  report.load = std::move(data.report);
  return report;
}

json to_json(const LoadReport& report) {
  json removed = json::object();
  for (const auto& [rule, count] : report.removed_by_rule) {
    removed[rule] = count;
  }
  json j;
  j["raw_rows"] = report.raw_rows;
  j["kept"] = report.kept;
  j["bad_rows"] = report.bad_rows;
  j["removed_by_rule"] = std::move(removed);
  return j;
}

namespace {

json sweep_summary_json(const std::optional<SweepResult>& sweep) {
  if (!sweep) {
    return nullptr;
  }
  json j;
  j["measures"] = sweep->measure_ids;
  j["resolution"] = sweep->resolution;
  j["grid_points"] = sweep->points.size();
  j["argmax_weights"] = sweep->argmax().weights;
  j["argmax_value"] = sweep->argmax().value;
  j["corner_limits"] = sweep->corner_limits;
  return j;
}

}  // namespace

json to_json(const AuditReport& report) {
  json j;
  j["n_records"] = report.n_records;
  json groups = json::object();
  for (const auto& [tag, count] : report.group_sizes) {
    groups[tag] = count;
  }
  j["group_sizes"] = std::move(groups);
  j["brier"] = report.brier;
  j["log"] = report.log;
  j["eqopp"] = report.eqopp;
  j["fnr_black"] = report.fnr_black;
  j["fnr_nonblack"] = report.fnr_nonblack;
  json utilities = json::array();
  for (const auto& entry : report.utilities) {
    json u;
    u["measure"] = entry.measure_id;
    u["utility"] = entry.utility;
    u["value"] = entry.value ? json(*entry.value) : json(nullptr);
    utilities.push_back(std::move(u));
  }
  j["utilities"] = std::move(utilities);
  json sweeps;
  sweeps["reciprocal"] = sweep_summary_json(report.sweep_reciprocal);
  sweeps["log_eqopp"] = sweep_summary_json(report.sweep_log_eqopp);
  j["sweeps"] = std::move(sweeps);
  j["artifacts"] = report.artifacts;
  if (report.load) {
    j["load"] = to_json(*report.load);
  }
  return j;
}

std::string audit_report_text(const AuditReport& report) {
  return to_json(report).dump(2) + "\n";
}

}  // namespace fairagg
