#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairagg/estimation.hpp"

namespace fairagg {

/// Kind tag for the one shipped fairness measure.
inline constexpr const char* kEqOppMeasure = "eqopp";

/// A fairness measure plus the instructions it needs. `kind` is an open
/// string so new measures can be added behind evaluate_fairness; the opaque
/// payload is reserved for measures whose instructions are not a group
/// partition.
struct FairnessMeasureSpec {
  std::string kind;
  GroupPartition instructions;
  std::optional<std::vector<std::byte>> opaque_payload;
};

/// Probability-weighted false negative rate of one group: among the group's
/// ground-truth positives, the average estimated probability of the negative
/// class. Requires a binary outcome space; the negative class is the label
/// other than the partition's positive label.
double group_fnr(const EstimatedModel& model,
                 const std::map<std::string, std::string>& truth,
                 const InputDistribution& p, const GroupPartition& partition,
                 const std::string& group);

/// Equal-opportunity measure: -|fnr(group_a) - fnr(group_b)|. Zero means the
/// two groups' weighted false negative rates coincide; more negative means a
/// wider gap.
double eq_opp(const EstimatedModel& model,
              const std::map<std::string, std::string>& truth,
              const InputDistribution& p, const GroupPartition& partition);

/// Dispatches to the measure named by `spec.kind`; UnsupportedMeasureError
/// for kinds this build does not ship.
double evaluate_fairness(const FairnessMeasureSpec& spec,
                         const EstimatedModel& model,
                         const std::map<std::string, std::string>& truth,
                         const InputDistribution& p);

}  // namespace fairagg
