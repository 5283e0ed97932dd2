#include "fairagg/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fairagg {

std::string to_string(ScoringRule rule) {
  switch (rule) {
    case ScoringRule::Brier: return "brier";
    case ScoringRule::Logarithmic: return "log";
    case ScoringRule::Spherical: return "spherical";
  }
  throw DomainError("unknown scoring rule");
}

ScoringRule scoring_rule_from_name(std::string_view name) {
  if (name == "brier") return ScoringRule::Brier;
  if (name == "log") return ScoringRule::Logarithmic;
  if (name == "spherical") return ScoringRule::Spherical;
  throw DomainError("unknown scoring rule: " + std::string(name));
}

double brier_score(const OutcomeDistribution& p, std::string_view outcome) {
  const std::size_t truth = p.space().index_of(outcome);
  double total = 0.0;
  for (std::size_t i = 0; i < p.probs().size(); ++i) {
    const double diff = p.prob_at(i) - (i == truth ? 1.0 : 0.0);
    total += diff * diff;
  }
  return -total;
}

double log_score(const OutcomeDistribution& p, std::string_view outcome,
                 LogZeroPolicy policy) {
  double prob = p.prob(outcome);
  if (prob <= 0.0) {
    if (policy == LogZeroPolicy::Fail) {
      throw ZeroProbabilityError(
          "logarithmic score undefined: zero probability assigned to outcome " +
          std::string(outcome));
    }
    prob = kLogScoreFloor;
  }
  return std::log(prob);
}

double spherical_score(const OutcomeDistribution& p, std::string_view outcome) {
  const double prob = p.prob(outcome);
  double sum_sq = 0.0;
  for (const double q : p.probs()) {
    sum_sq += q * q;
  }
  // sum_sq >= 1/|Y| for any probability vector, so the norm never vanishes.
  return prob / std::sqrt(sum_sq);
}

double score(ScoringRule rule, const OutcomeDistribution& p,
             std::string_view outcome, LogZeroPolicy policy) {
  switch (rule) {
    case ScoringRule::Brier: return brier_score(p, outcome);
    case ScoringRule::Logarithmic: return log_score(p, outcome, policy);
    case ScoringRule::Spherical: return spherical_score(p, outcome);
  }
  throw DomainError("unknown scoring rule");
}

namespace {

// All lattice points (c_1/n, ..., c_d/n) with nonnegative integer parts
// summing to n; interior_only keeps parts strictly positive.
std::vector<std::vector<double>> simplex_lattice(std::size_t dimension,
                                                 std::size_t n,
                                                 bool interior_only) {
  std::vector<std::vector<double>> points;
  const long lo = interior_only ? 1 : 0;
  if (dimension == 2) {
    for (long i = lo; i <= static_cast<long>(n) - lo; ++i) {
      points.push_back({static_cast<double>(i) / static_cast<double>(n),
                        static_cast<double>(n - i) / static_cast<double>(n)});
    }
  } else {
    for (long i = lo; i <= static_cast<long>(n); ++i) {
      for (long j = lo; i + j <= static_cast<long>(n); ++j) {
        const long k = static_cast<long>(n) - i - j;
        if (k < lo) {
          continue;
        }
        points.push_back({static_cast<double>(i) / static_cast<double>(n),
                          static_cast<double>(j) / static_cast<double>(n),
                          static_cast<double>(k) / static_cast<double>(n)});
      }
    }
  }
  return points;
}

}  // namespace

ProprietyReport check_strict_propriety(const ScoreFn& score_fn,
                                       const OutcomeSpace& space,
                                       double grid_step, bool interior_only) {
  if (space.size() != 2 && space.size() != 3) {
    throw DomainError("strict-propriety check supports |Y| in {2, 3}");
  }
  if (!(grid_step > 0.0 && grid_step <= 0.1)) {
    throw DomainError("grid step must lie in (0, 0.1]");
  }
  const auto n = static_cast<std::size_t>(std::llround(1.0 / grid_step));
  const auto lattice = simplex_lattice(space.size(), n, interior_only);

  std::vector<OutcomeDistribution> grid;
  grid.reserve(lattice.size());
  for (const auto& probs : lattice) {
    grid.emplace_back(OutcomeDistribution(
        std::make_shared<const OutcomeSpace>(space), probs));
  }

  // Scores of every grid distribution at every outcome, computed once.
  std::vector<std::vector<double>> scores(grid.size());
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    scores[gi].reserve(space.size());
    for (const auto& label : space.labels()) {
      scores[gi].push_back(score_fn(grid[gi], label));
    }
  }

  ProprietyReport report;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t qi = 0; qi < grid.size(); ++qi) {
    double honest = 0.0;
    for (std::size_t y = 0; y < space.size(); ++y) {
      honest += grid[qi].prob_at(y) * scores[qi][y];
    }
    for (std::size_t pi = 0; pi < grid.size(); ++pi) {
      if (pi == qi) {
        continue;
      }
      double expected = 0.0;
      for (std::size_t y = 0; y < space.size(); ++y) {
        expected += grid[qi].prob_at(y) * scores[pi][y];
      }
      report.worst_violation = std::max(report.worst_violation, expected - honest);
    }
  }
  report.is_proper = report.worst_violation <= -1e-12;
  return report;
}

ProprietyReport check_strict_propriety(ScoringRule rule,
                                       const OutcomeSpace& space,
                                       double grid_step) {
  const bool interior_only = rule == ScoringRule::Logarithmic;
  return check_strict_propriety(
      [rule](const OutcomeDistribution& p, std::string_view y) {
        return score(rule, p, y);
      },
      space, grid_step, interior_only);
}

}  // namespace fairagg
