#include "fairagg/accuracy.hpp"

#include <algorithm>

namespace fairagg {

namespace {

void check_same_domain(const EstimatedModel& model,
                       const std::map<std::string, std::string>& truth,
                       const InputDistribution& p) {
  if (model.size() != truth.size() || model.size() != p.size()) {
    throw DomainError("model, ground truth, and input distribution must share"
                      " one input-id domain");
  }
  auto t = truth.begin();
  auto w = p.weights().begin();
  for (const auto& [id, dist] : model.distributions()) {
    if (t->first != id || w->first != id) {
      throw DomainError("model, ground truth, and input distribution must share"
                        " one input-id domain (mismatch at " + id + ")");
    }
    ++t;
    ++w;
  }
}

}  // namespace

double estimated_accuracy(ScoringRule rule, const EstimatedModel& model,
                          const std::map<std::string, std::string>& truth,
                          const InputDistribution& p, LogZeroPolicy policy) {
  check_same_domain(model, truth, p);
  KahanSum total;
  // std::map iteration is already sorted by input id.
  for (const auto& [id, dist] : model.distributions()) {
    total.add(p.weight(id) * score(rule, dist, truth.at(id), policy));
  }
  return total.value();
}

}  // namespace fairagg
