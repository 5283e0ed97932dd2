// Acceptance gate: one line per criterion, [PASS] / [FAIL] / [SKIP].
//
// Criteria 1-3 compare a full recidivism audit against the reference targets
// measured on the ProPublica two-year dataset. That file is not shipped here
// (see tools/fetch_compas.py), so those value checks are skipped unless the
// dataset is present at $FAIRAGG_COMPAS_CSV or data/compas-scores-two-years.csv.
// Everything else — the runtime budget, utility reproduction, both sweep
// corner checks, propriety, aggregation indifference, oracle equivalence,
// and the fixture report — runs unconditionally.
//
// Exit status: 0 when nothing failed (skips allowed), 1 otherwise.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairagg/accuracy.hpp"
#include "fairagg/compas.hpp"
#include "fairagg/fairness.hpp"

#include "support/oracles.hpp"

using namespace fairagg;

namespace {

// Reference audit targets for the ProPublica two-year data: the measured
// accuracy/fairness vector and the utility values derived from it.
constexpr double kRefBrier = -0.459;
constexpr double kRefLog = -0.740;
constexpr double kRefEqOpp = -0.145;
constexpr double kRefFnrBlack = 0.44;
constexpr double kRefFnrNonBlack = 0.29;
constexpr double kRefUtilityBrier = 2.18;
constexpr double kRefUtilityLog = 1.35;
constexpr double kRefUtilityEqOpp = 6.90;
constexpr double kRefLogUtilityEqOpp = 1.93;

int g_failures = 0;
int g_skips = 0;

void report(int criterion, bool ok, const std::string& name,
            const std::string& detail) {
  std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  if (!ok) {
    ++g_failures;
  }
}

void report_skip(int criterion, const std::string& name,
                 const std::string& detail) {
  std::printf("[SKIP] %2d. %s: %s\n", criterion, name.c_str(), detail.c_str());
  ++g_skips;
}

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6g", value);
  return buffer;
}

bool within(double value, double target, double band) {
  return std::fabs(value - target) <= band;
}

std::optional<std::string> find_dataset() {
  if (const char* env = std::getenv("FAIRAGG_COMPAS_CSV");
      env != nullptr && *env != '\0') {
    return std::string(env);
  }
  const std::string local =
      std::string(FAIRAGG_DATA_DIR) + "/compas-scores-two-years.csv";
  if (std::filesystem::exists(local)) {
    return local;
  }
  return std::nullopt;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// A 7,214-row stream shaped like the two-year data (deciles cycling 0-10,
// alternating groups, both groups holding positives), for timing the audit
// when the real file is absent.
CompasData synthetic_seven_thousand() {
  std::ostringstream csv;
  csv << "id,race,decile_score,two_year_recid\n";
  for (int i = 0; i < 7214; ++i) {
    csv << (i + 1) << ","
        << (i % 2 == 0 ? "African-American" : "Caucasian") << ","
        << (i % 11) << "," << (i % 3 == 0 ? 1 : 0) << "\n";
  }
  return load_compas_text(csv.str(), FilterSpec{}, "synthetic");
}

MeasureVector reference_vector() {
  return MeasureVector(
      {{"brier", kRefBrier}, {"log", kRefLog}, {"eqopp", kRefEqOpp}}, 2, 1);
}

std::map<std::string, UtilitySpec> reciprocal_utilities() {
  return {{"brier", UtilitySpec::reciprocal_abs()},
          {"log", UtilitySpec::reciprocal_abs()},
          {"eqopp", UtilitySpec::reciprocal_abs()}};
}

std::map<std::string, UtilitySpec> log_eqopp_utilities() {
  return {{"brier", UtilitySpec::reciprocal_abs()},
          {"log", UtilitySpec::reciprocal_abs()},
          {"eqopp", UtilitySpec::log_reciprocal_abs()}};
}

// Maximum weight on the given measure across the sweep's grid.
double max_weight_at(const SweepResult& sweep, std::size_t index) {
  double best = 0.0;
  for (const auto& point : sweep.points) {
    best = std::max(best, point.weights[index]);
  }
  return best;
}

// --------------------------------------------------------------------------
// Criteria 1-3: dataset audit values and the runtime budget.

void criteria_dataset(const std::optional<AuditReport>& audit,
                      double audit_seconds, std::size_t audited_rows) {
  const std::string timing = "audit of " + std::to_string(audited_rows) +
                             " rows took " + fmt(audit_seconds) + "s (< 2s required)";
  const bool fast_enough = audit_seconds < 2.0;
  if (audit.has_value()) {
    report(1, within(audit->brier, kRefBrier, 0.01) && fast_enough,
           "dataset Brier accuracy",
           "value " + fmt(audit->brier) + " (target -0.459 +/- 0.01); " + timing);
    report(2, within(audit->log, kRefLog, 0.01), "dataset log accuracy",
           "value " + fmt(audit->log) + " (target -0.740 +/- 0.01)");
    const bool eqopp_ok = within(audit->eqopp, kRefEqOpp, 0.005) &&
                          within(audit->fnr_black, kRefFnrBlack, 0.01) &&
                          within(audit->fnr_nonblack, kRefFnrNonBlack, 0.01);
    report(3, eqopp_ok, "dataset equal opportunity",
           "eqopp " + fmt(audit->eqopp) + " (target -0.145 +/- 0.005), FNR " +
               fmt(audit->fnr_black) + " / " + fmt(audit->fnr_nonblack) +
               " (targets 0.44 / 0.29 +/- 0.01)");
    return;
  }
  const std::string how =
      "dataset not present (set FAIRAGG_COMPAS_CSV or add "
      "data/compas-scores-two-years.csv; see tools/fetch_compas.py)";
  if (fast_enough) {
    report_skip(1, "dataset Brier accuracy",
                how + "; runtime budget still verified: synthetic " + timing);
  } else {
    report(1, false, "dataset Brier accuracy",
           "runtime budget exceeded on synthetic data: " + timing);
  }
  report_skip(2, "dataset log accuracy", how);
  report_skip(3, "dataset equal opportunity", how);
}

// --------------------------------------------------------------------------
// Criterion 4: utility values at the reference measurement.

void criterion_utilities() {
  const double u_brier = utility_eval(UtilitySpec::reciprocal_abs(), kRefBrier);
  const double u_log = utility_eval(UtilitySpec::reciprocal_abs(), kRefLog);
  const double u_eqopp = utility_eval(UtilitySpec::reciprocal_abs(), kRefEqOpp);
  const double u_log_eqopp =
      utility_eval(UtilitySpec::log_reciprocal_abs(), kRefEqOpp);
  const bool ok = within(u_brier, kRefUtilityBrier, 0.02) &&
                  within(u_log, kRefUtilityLog, 0.02) &&
                  within(u_eqopp, kRefUtilityEqOpp, 0.02) &&
                  within(u_log_eqopp, kRefLogUtilityEqOpp, 0.02);
  report(4, ok, "utility reproduction",
         "1/|r| = " + fmt(u_brier) + " / " + fmt(u_log) + " / " + fmt(u_eqopp) +
             " (targets 2.18 / 1.35 / 6.90 +/- 0.02), ln(1/|r|) at eqopp = " +
             fmt(u_log_eqopp) + " (target 1.93 +/- 0.02)");
}

// --------------------------------------------------------------------------
// Criteria 5-6: sweep corner checks, at the reference vector and (when the
// dataset is present) at the audited vector.

void criterion_corner_eqopp(const std::optional<AuditReport>& audit) {
  const auto sweep = simplex_sweep(reference_vector(), reciprocal_utilities(), 100);
  const double top = max_weight_at(sweep, 2);
  bool ok = sweep.argmax().weights[2] == top &&
            sweep.corner_limits[2] > sweep.corner_limits[0] &&
            sweep.corner_limits[2] > sweep.corner_limits[1];
  std::string detail = "argmax w_eqopp = " + fmt(sweep.argmax().weights[2]) +
                       " (grid max " + fmt(top) + "), corner limit " +
                       fmt(sweep.corner_limits[2]) + " dominates " +
                       fmt(sweep.corner_limits[0]) + " and " +
                       fmt(sweep.corner_limits[1]);
  if (audit.has_value() && audit->sweep_reciprocal.has_value()) {
    const auto& audited = *audit->sweep_reciprocal;
    ok = ok && audited.argmax().weights[2] == max_weight_at(audited, 2);
    detail += "; audited-vector argmax w_eqopp = " +
              fmt(audited.argmax().weights[2]);
  }
  report(5, ok, "reciprocal-utility sweep peaks at the fairness corner", detail);
}

void criterion_corner_brier(const std::optional<AuditReport>& audit) {
  const auto sweep = simplex_sweep(reference_vector(), log_eqopp_utilities(), 100);
  const double top = max_weight_at(sweep, 0);
  bool ok = sweep.argmax().weights[0] == top;
  std::string detail = "argmax w_brier = " + fmt(sweep.argmax().weights[0]) +
                       " (grid max " + fmt(top) + ")";
  if (audit.has_value() && audit->sweep_log_eqopp.has_value()) {
    const auto& audited = *audit->sweep_log_eqopp;
    ok = ok && audited.argmax().weights[0] == max_weight_at(audited, 0);
    detail += "; audited-vector argmax w_brier = " +
              fmt(audited.argmax().weights[0]);
  }
  report(6, ok, "log-scaled fairness utility moves the peak to the Brier corner",
         detail);
}

// --------------------------------------------------------------------------
// Criterion 7: strict propriety by brute force, with the counterexample.

void criterion_propriety() {
  const auto start = std::chrono::steady_clock::now();
  const auto binary = make_space({"no", "yes"});
  const auto ternary = make_space({"a", "b", "c"});
  bool all_proper = true;
  for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                          ScoringRule::Spherical}) {
    all_proper = all_proper && check_strict_propriety(rule, *binary, 0.05).is_proper;
    all_proper = all_proper && check_strict_propriety(rule, *ternary, 0.05).is_proper;
  }
  // The same spherical shape without the squared denominator: dividing by
  // sqrt of the probability sum (a constant 1) makes the score linear in
  // p(truth), which a brute-force grid must reject.
  const ScoreFn unsquared = [](const OutcomeDistribution& dist,
                               std::string_view truth) {
    double total = 0.0;
    for (const double p : dist.probs()) {
      total += p;
    }
    return dist.prob(truth) / std::sqrt(total);
  };
  const auto counterexample =
      check_strict_propriety(unsquared, *binary, 0.05, /*interior_only=*/false);
  const double elapsed = seconds_since(start);
  const bool ok = all_proper && !counterexample.is_proper && elapsed < 30.0;
  report(7, ok, "strict propriety grid",
         std::string("brier/log/spherical proper on |Y|=2,3 at step 0.05: ") +
             (all_proper ? "yes" : "NO") + "; unsquared variant rejected: " +
             (!counterexample.is_proper ? "yes" : "NO") + " (worst violation " +
             fmt(counterexample.worst_violation) + "); took " + fmt(elapsed) +
             "s (< 30s required)");
}

// --------------------------------------------------------------------------
// Criterion 8: expected-utility indifference on constructed lottery pairs.

// Inverse of the utility on the negative half-line, where all measure values
// in these trials live.
double utility_inverse_negative(const UtilitySpec& spec, double u) {
  switch (spec.kind()) {
    case UtilityKind::Linear:
      return u;
    case UtilityKind::ReciprocalAbs:
      return -1.0 / u;
    case UtilityKind::LogReciprocalAbs:
      return -std::exp(-u);
    case UtilityKind::PiecewiseTable:
      break;
  }
  return u;
}

void criterion_indifference() {
  oracle::Rng rng(71);
  int satisfied = 0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    // Random utility per measure; spread one measure of nu symmetrically in
    // utility space around mu's point so the per-measure expectations match.
    const std::vector<UtilitySpec> kinds = {UtilitySpec::linear(),
                                            UtilitySpec::reciprocal_abs(),
                                            UtilitySpec::log_reciprocal_abs()};
    const UtilitySpec u_a = kinds[rng.below(kinds.size())];
    const UtilitySpec u_b = kinds[rng.below(kinds.size())];
    const double va = -(0.1 + rng.uniform());
    const double vb = -(0.1 + rng.uniform());
    const double ua_center = utility_eval(u_a, va);
    const double spread = 0.05 * (rng.uniform() + 1e-3);
    const double va_low = utility_inverse_negative(u_a, ua_center - spread);
    const double va_high = utility_inverse_negative(u_a, ua_center + spread);

    const MeasureVector center({{"a", va}, {"b", vb}}, 1, 1);
    const MeasureVector low({{"a", va_low}, {"b", vb}}, 1, 1);
    const MeasureVector high({{"a", va_high}, {"b", vb}}, 1, 1);
    const FiniteLottery mu({{center, 1.0}});
    const FiniteLottery nu({{low, 0.5}, {high, 0.5}});

    const double wa = rng.uniform() * 2.0 - 0.5;  // negative weights allowed
    const double wb = rng.uniform() * 2.0 - 0.5;
    const double alpha = rng.uniform() * 10.0 - 5.0;
    const AggregationSpec spec(alpha, {{"a", wa}, {"b", wb}},
                               {{"a", u_a}, {"b", u_b}});
    const auto result = check_pareto_indifference(mu, nu, spec, 1e-9);
    if (result.premise_holds && result.conclusion_holds) {
      ++satisfied;
    }
  }
  report(8, satisfied == trials, "aggregation indifference",
         std::to_string(satisfied) + " of " + std::to_string(trials) +
             " constructed lottery pairs kept overall indifference");
}

// --------------------------------------------------------------------------
// Criterion 9: oracle equivalence on random streams.

void criterion_oracle_equivalence() {
  oracle::Rng rng(72);
  double worst = 0.0;
  int log_compared = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    const auto setup = oracle::random_setup(rng, 10);
    const auto model = empirical_mle_estimator(setup.stream);
    const auto truth = setup.stream.ground_truth();

    for (const auto rule : {ScoringRule::Brier, ScoringRule::Spherical}) {
      const double lib = estimated_accuracy(rule, model, truth, setup.p);
      const double ref = oracle::naive_estimated_accuracy(rule, model, truth, setup.p);
      worst = std::max(worst, std::fabs(lib - ref));
    }
    bool log_defined = true;
    for (const auto& [id, outcome] : truth) {
      log_defined = log_defined && model.at(id).prob(outcome) > 0.0;
    }
    if (log_defined) {
      ++log_compared;
      const double lib =
          estimated_accuracy(ScoringRule::Logarithmic, model, truth, setup.p);
      const double ref = oracle::naive_estimated_accuracy(
          ScoringRule::Logarithmic, model, truth, setup.p);
      worst = std::max(worst, std::fabs(lib - ref));
    }

    for (const auto& group :
         {setup.partition.group_a(), setup.partition.group_b()}) {
      const double lib = group_fnr(model, truth, setup.p, setup.partition, group);
      const double ref =
          oracle::naive_group_fnr(model, truth, setup.p, setup.partition, group);
      worst = std::max(worst, std::fabs(lib - ref));
    }
    const double lib = eq_opp(model, truth, setup.p, setup.partition);
    const double ref = oracle::naive_eq_opp(model, truth, setup.p, setup.partition);
    worst = std::max(worst, std::fabs(lib - ref));
  }
  report(9, worst <= 1e-12, "oracle equivalence",
         "max |library - naive| = " + fmt(worst) + " over " +
             std::to_string(trials) + " random streams (log rule defined on " +
             std::to_string(log_compared) + ")");
}

// --------------------------------------------------------------------------
// Criterion 10: byte-exact fixture report.

void criterion_fixture() {
  const std::string fixture =
      std::string(FAIRAGG_DATA_DIR) + "/synthetic_compas.csv";
  const std::string expected_path =
      std::string(FAIRAGG_EXPECTED_DIR) + "/synthetic_audit.json";
  std::ifstream in(expected_path, std::ios::binary);
  if (!in) {
    report(10, false, "fixture report", "missing file: " + expected_path);
    return;
  }
  std::ostringstream expected;
  expected << in.rdbuf();
  const auto audit = run_audit_file(fixture, FilterSpec{}, AuditConfig{});
  const std::string actual = audit_report_text(audit);
  report(10, actual == expected.str(), "fixture report",
         actual == expected.str()
             ? "50-row fixture reproduced byte-exactly (" +
                   std::to_string(actual.size()) + " bytes)"
             : "report differs from " + expected_path);
}

}  // namespace

int main() {
  std::optional<AuditReport> audit;
  double audit_seconds = 0.0;
  std::size_t audited_rows = 0;

  try {
    const auto dataset = find_dataset();
    if (dataset.has_value()) {
      const auto start = std::chrono::steady_clock::now();
      audit = run_audit_file(*dataset, FilterSpec{}, AuditConfig{});
      audit_seconds = seconds_since(start);
      audited_rows = audit->n_records;
    } else {
      const auto data = synthetic_seven_thousand();
      audited_rows = data.stream.records().size();
      const auto start = std::chrono::steady_clock::now();
      (void)run_audit(data.stream, data.partition, AuditConfig{});
      audit_seconds = seconds_since(start);
    }

    criteria_dataset(audit, audit_seconds, audited_rows);
    criterion_utilities();
    criterion_corner_eqopp(audit);
    criterion_corner_brier(audit);
    criterion_propriety();
    criterion_indifference();
    criterion_oracle_equivalence();
    criterion_fixture();
  } catch (const std::exception& e) {
    std::printf("[FAIL] acceptance run aborted: %s\n", e.what());
    return 1;
  }

  std::printf("%d passed, %d skipped, %d failed\n", 10 - g_skips - g_failures,
              g_skips, g_failures);
  return g_failures == 0 ? 0 : 1;
}
