#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "fairagg/core.hpp"

namespace fairagg {

/// The three shipped strictly proper scoring rules.
enum class ScoringRule { Brier, Logarithmic, Spherical };

std::string to_string(ScoringRule rule);
/// Parses "brier" | "log" | "spherical"; DomainError otherwise.
ScoringRule scoring_rule_from_name(std::string_view name);

/// What to do when the logarithmic score meets a zero-probability outcome.
/// Fail raises ZeroProbabilityError; Floor clamps the probability to
/// kLogScoreFloor first. Floor is for exploratory use only.
enum class LogZeroPolicy { Fail, Floor };

inline constexpr double kLogScoreFloor = 1e-10;

/// -sum_y (p(y) - 1[y = outcome])^2. Range [-2, 0]; zero exactly at the point
/// mass on `outcome`.
double brier_score(const OutcomeDistribution& p, std::string_view outcome);

/// ln p(outcome). Range (-inf, 0]; zero exactly when p(outcome) = 1.
double log_score(const OutcomeDistribution& p, std::string_view outcome,
                 LogZeroPolicy policy = LogZeroPolicy::Fail);

/// p(outcome) / sqrt(sum_y p(y)^2), the L2-normalized probability of the
/// realized outcome. Range [0, 1]; one exactly at the point mass on `outcome`.
double spherical_score(const OutcomeDistribution& p, std::string_view outcome);

/// Dispatch on the rule kind.
double score(ScoringRule rule, const OutcomeDistribution& p,
             std::string_view outcome, LogZeroPolicy policy = LogZeroPolicy::Fail);

struct ProprietyReport {
  bool is_proper = false;
  /// Largest expected-score excess E_q[s(p,.)] - E_q[s(q,.)] over all grid
  /// pairs with p != q. Strictly proper rules keep this below -1e-12.
  double worst_violation = 0.0;
};

using ScoreFn =
    std::function<double(const OutcomeDistribution&, std::string_view)>;

/// Brute-force strict-propriety check on the probability-simplex lattice with
/// mesh `grid_step` (0 < grid_step <= 0.1). For every grid distribution q the
/// expected score argmax over the grid must be p = q. Only |Y| in {2, 3} is
/// supported. `interior_only` restricts both p and q to strictly positive
/// grid points (needed for rules that reject zero probabilities).
ProprietyReport check_strict_propriety(const ScoreFn& score_fn,
                                       const OutcomeSpace& space,
                                       double grid_step, bool interior_only);

/// Same check for a shipped rule; the Logarithmic rule uses the interior grid.
ProprietyReport check_strict_propriety(ScoringRule rule,
                                       const OutcomeSpace& space,
                                       double grid_step);

}  // namespace fairagg
