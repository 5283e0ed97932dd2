#include "fairagg/fairness.hpp"

#include <cmath>

namespace fairagg {

namespace {

const std::string& negative_label(const OutcomeSpace& space,
                                  const std::string& positive_label) {
  if (space.size() != 2) {
    throw DomainError("false negative rate requires a binary outcome space");
  }
  if (!space.contains(positive_label)) {
    throw DomainError("positive label not in outcome space: " + positive_label);
  }
  const std::size_t positive_idx = space.index_of(positive_label);
  return space.labels()[1 - positive_idx];
}

}  // namespace

double group_fnr(const EstimatedModel& model,
                 const std::map<std::string, std::string>& truth,
                 const InputDistribution& p, const GroupPartition& partition,
                 const std::string& group) {
  if (group != partition.group_a() && group != partition.group_b()) {
    throw DomainError("group is not one of the partition's distinguished tags: " +
                      group);
  }
  const OutcomeSpace& space = model.distributions().begin()->second.space();
  const std::string& negative = negative_label(space, partition.positive_label());
  for (const auto& [id, dist] : model.distributions()) {
    if (!truth.contains(id)) {
      throw DomainError("input id has no ground truth: " + id);
    }
    if (!p.weights().contains(id)) {
      throw DomainError("input id has no probability weight: " + id);
    }
  }

  // P(group's positive class) and the weighted estimated negative-class
  // probability over that class, normalized by a single division at the end.
  // Sorted-id Kahan sums keep both reductions deterministic, and because
  // every mass term bounds its rate term the quotient stays in [0, 1].
  KahanSum class_mass;
  KahanSum rate;
  for (const auto& [id, dist] : model.distributions()) {
    if (partition.group_of_id(id) == group &&
        truth.at(id) == partition.positive_label()) {
      class_mass.add(p.weight(id));
      rate.add(p.weight(id) * dist.prob(negative));
    }
  }
  if (!(class_mass.value() > 0.0)) {
    throw EmptyPositiveClassError(
        "group has no ground-truth positives with positive probability: " + group);
  }
  return rate.value() / class_mass.value();
}

double eq_opp(const EstimatedModel& model,
              const std::map<std::string, std::string>& truth,
              const InputDistribution& p, const GroupPartition& partition) {
  const double fnr_a = group_fnr(model, truth, p, partition, partition.group_a());
  const double fnr_b = group_fnr(model, truth, p, partition, partition.group_b());
  return -std::abs(fnr_a - fnr_b);
}

double evaluate_fairness(const FairnessMeasureSpec& spec,
                         const EstimatedModel& model,
                         const std::map<std::string, std::string>& truth,
                         const InputDistribution& p) {
  if (spec.kind == kEqOppMeasure) {
    return eq_opp(model, truth, p, spec.instructions);
  }
  throw UnsupportedMeasureError("unsupported fairness measure: " + spec.kind);
}

}  // namespace fairagg
