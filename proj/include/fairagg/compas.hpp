#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fairagg/aggregation.hpp"
#include "fairagg/core.hpp"
#include "fairagg/estimation.hpp"
#include "fairagg/json_io.hpp"

namespace fairagg {

/// One parsed row of the Broward County two-year recidivism table.
struct CompasRow {
  std::string row_id;
  int decile_score = 0;  // COMPAS risk decile, 0-10
  std::string race;
  int two_year_recid = 0;  // 0 or 1

  friend bool operator==(const CompasRow&, const CompasRow&) = default;
};

/// Group tags assigned by the loader's race dichotomization.
inline constexpr const char* kBlackGroup = "Black";
inline constexpr const char* kNonBlackGroup = "non-Black";

/// Row-exclusion rules for the two-year table. Everything defaults to off:
/// the audit evaluates the scores as recorded, keeping every parseable row
/// (the canonical file yields ~7,212 of them). Each rule replicates one step
/// of the widely used two-year analysis filter and can be enabled on its
/// own; propublica() turns all four on.
struct FilterSpec {
  /// Keep only rows with |days_b_screening_arrest| <= 30; drops rows where
  /// that column is empty.
  bool screening_window = false;
  /// Drop rows with is_recid == -1 (no matching COMPAS case).
  bool require_recid_flag = false;
  /// Drop ordinary-traffic-offense rows (c_charge_degree == "O").
  bool exclude_traffic = false;
  /// Drop rows whose score_text is "N/A" or empty.
  bool require_score_text = false;
  /// Count unparseable rows in the load report instead of failing the load.
  bool skip_bad_rows = false;

  static FilterSpec propublica();

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

/// Where every raw data row went during a load. removed_by_rule lists each
/// enabled rule in application order (zero counts included); a row is
/// charged to the first rule that drops it, so
/// raw_rows == kept + bad_rows + removed_total().
struct LoadReport {
  std::size_t raw_rows = 0;
  std::size_t kept = 0;
  std::size_t bad_rows = 0;
  std::vector<std::pair<std::string, std::size_t>> removed_by_rule;

  std::size_t removed_total() const;

  friend bool operator==(const LoadReport&, const LoadReport&) = default;
};

/// A loaded two-year table: the kept rows in file order, the evaluation
/// stream over {no_recid, recid} with the decile in raw_score, the
/// Black / non-Black partition with no_recid as the positive class, and the
/// row accounting.
struct CompasData {
  std::vector<CompasRow> rows;
  PredictionStream stream;
  GroupPartition partition;
  LoadReport report;
};

/// Parses a ProPublica-schema CSV (UTF-8, header row; quoted fields
/// supported). Row ids come from the `id` column when present, else the
/// 1-based row ordinal; repeated ids get a `#k` suffix so every record keeps
/// its own identity. Ground truth is "recid" when two_year_recid is 1, else
/// "no_recid"; the group is "Black" when race equals "African-American",
/// else "non-Black" (both groups must occur).
///
/// Errors: unreadable file, missing header, or missing required columns
/// (decile_score, race, two_year_recid, plus any column an enabled filter
/// rule needs) raise SchemaError; unparseable rows raise RowError unless
/// filter.skip_bad_rows is set.
CompasData load_compas_csv(const std::string& path,
                           const FilterSpec& filter = {});

/// Same parse applied to in-memory CSV text. `source_name` labels errors.
CompasData load_compas_text(const std::string& text,
                            const FilterSpec& filter = {},
                            const std::string& source_name = "<csv>");

/// Audit knobs: sweep resolution and where to write the sweep artifacts.
/// An empty out_dir writes nothing (the report then lists no artifacts).
struct AuditConfig {
  std::size_t sweep_resolution = 100;
  std::string out_dir;
  bool write_svg = true;
};

/// One evaluated utility: the named utility function applied to the named
/// measure's audited value. `value` is absent when the utility is undefined
/// there (a measure sitting exactly at its optimum has no reciprocal
/// utility).
struct UtilityReportEntry {
  std::string measure_id;
  std::string utility;
  std::optional<double> value;

  friend bool operator==(const UtilityReportEntry&,
                         const UtilityReportEntry&) = default;
};

/// Everything the end-to-end audit reports. fnr_black / fnr_nonblack are the
/// false negative rates of the partition's group_a / group_b respectively.
/// The two sweeps cover the audit's two utility configurations: reciprocal
/// utilities on all three measures, and the variant with ln(1/|r|) on the
/// fairness measure. Sweeps are absent when some measure sits exactly at
/// zero, where those utilities are undefined.
struct AuditReport {
  std::size_t n_records = 0;
  std::vector<std::pair<std::string, std::size_t>> group_sizes;  // a, then b
  double brier = 0.0;
  double log = 0.0;
  double eqopp = 0.0;
  double fnr_black = 0.0;
  double fnr_nonblack = 0.0;
  std::vector<UtilityReportEntry> utilities;
  std::optional<SweepResult> sweep_reciprocal;
  std::optional<SweepResult> sweep_log_eqopp;
  std::vector<std::string> artifacts;  // file names relative to out_dir
  std::optional<LoadReport> load;
};

/// Runs the full audit on an already-loaded stream: decile estimator,
/// uniform input distribution, Brier and logarithmic estimated accuracy,
/// per-group false negative rates, equal opportunity, the utility table,
/// and both weight sweeps (written to config.out_dir when set). Errors from
/// any stage propagate with the stage name prefixed.
AuditReport run_audit(const PredictionStream& stream,
                      const GroupPartition& partition,
                      const AuditConfig& config = {});

/// load_compas_csv + run_audit, with the load accounting attached.
AuditReport run_audit_file(const std::string& path,
                           const FilterSpec& filter = {},
                           const AuditConfig& config = {});

json to_json(const LoadReport& report);
json to_json(const AuditReport& report);

/// Serializes the report as stable-key-order JSON (two-space indent,
/// trailing newline), so equal reports produce byte-identical files.
std::string audit_report_text(const AuditReport& report);

}  // namespace fairagg
