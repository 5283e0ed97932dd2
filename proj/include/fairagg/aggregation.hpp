#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fairagg/core.hpp"

namespace fairagg {

/// Evaluates a utility spec at one measure value. Reciprocal kinds are
/// undefined at r = 0 (UtilityUndefinedError): a measure sitting exactly at
/// its optimum has no finite reciprocal utility.
double utility_eval(const UtilitySpec& spec, double r);

/// The all-things-considered value: alpha + sum_M w_M * u_M(v_M). The
/// weighting must cover exactly the vector's measure ids.
double overall(const AggregationSpec& spec, const MeasureVector& v);

/// Expected utility of one measure's utility function under the lottery.
double expected_utility(const FiniteLottery& lottery, const UtilitySpec& utility,
                        const std::string& measure_id);

/// Expected overall value under the lottery.
double expected_utility(const FiniteLottery& lottery, const AggregationSpec& spec);

struct ParetoIndifferenceReport {
  /// Per-measure expected utilities of mu and nu agree within tol for every
  /// measure.
  bool premise_holds = false;
  /// Expected overall values agree within (sum |w_M|) * tol + tol.
  bool conclusion_holds = false;
};

/// Checks the ex ante Pareto-indifference property on a pair of lotteries:
/// when every measure's expected utility coincides, the linear overall form
/// guarantees the expected overall values coincide too (up to the weighted
/// tolerance bound).
ParetoIndifferenceReport check_pareto_indifference(const FiniteLottery& mu,
                                                   const FiniteLottery& nu,
                                                   const AggregationSpec& spec,
                                                   double tol);

/// All weight vectors (c_1/k, ..., c_d/k) with strictly positive integer
/// parts summing to the resolution k, generated in lexicographic order.
class SimplexGrid {
 public:
  SimplexGrid(std::size_t dimension, std::size_t resolution);

  std::size_t dimension() const { return dimension_; }
  std::size_t resolution() const { return resolution_; }
  const std::vector<std::vector<double>>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

 private:
  std::size_t dimension_;
  std::size_t resolution_;
  std::vector<std::vector<double>> points_;
};

struct SweepPoint {
  std::vector<double> weights;
  double value = 0.0;
};

/// Overall values across the whole positive-weight simplex grid, with the
/// argmax point and the per-corner limits (the value overall approaches as
/// all weight concentrates on one measure, i.e. that measure's utility).
struct SweepResult {
  std::vector<std::string> measure_ids;
  std::size_t resolution = 0;
  std::vector<SweepPoint> points;
  std::size_t argmax_index = 0;
  std::vector<double> corner_limits;

  const SweepPoint& argmax() const { return points[argmax_index]; }
};

/// Evaluates overall (alpha = 0) at every grid point of the positive-weight
/// simplex with the given resolution. Ties at the maximum resolve to the
/// lexicographically smallest weight vector.
SweepResult simplex_sweep(const MeasureVector& v,
                          const std::map<std::string, UtilitySpec>& utilities,
                          std::size_t resolution);

/// CSV with header "w_<id>,...,overall", one row per grid point, six decimal
/// places.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

/// Self-contained SVG ternary heatmap of a three-measure sweep: one colored
/// dot per grid point on a linear color scale, minimum and maximum annotated.
std::string sweep_ternary_svg(const SweepResult& sweep);

}  // namespace fairagg
