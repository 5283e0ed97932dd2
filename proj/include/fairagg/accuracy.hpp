#pragma once

#include <map>
#include <string>

#include "fairagg/estimation.hpp"
#include "fairagg/scoring.hpp"

namespace fairagg {

/// Expected score of the estimated model against ground truth under the
/// input distribution: sum over inputs of weight(x) * s(model(x), truth(x)).
///
/// `model`, `truth`, and `p` must share exactly the same input-id domain.
/// Terms are accumulated in sorted input-id order with compensated summation,
/// so the value is bit-stable across runs.
double estimated_accuracy(ScoringRule rule, const EstimatedModel& model,
                          const std::map<std::string, std::string>& truth,
                          const InputDistribution& p,
                          LogZeroPolicy policy = LogZeroPolicy::Fail);

}  // namespace fairagg
