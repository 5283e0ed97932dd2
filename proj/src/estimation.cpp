#include "fairagg/estimation.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

namespace fairagg {

EstimatedModel::EstimatedModel(std::map<std::string, OutcomeDistribution> by_input)
    : by_input_(std::move(by_input)) {
  if (by_input_.empty()) {
    throw DomainError("estimated model must not be empty");
  }
}

const OutcomeDistribution& EstimatedModel::at(const std::string& input_id) const {
  auto it = by_input_.find(input_id);
  if (it == by_input_.end()) {
    throw DomainError("input id not in estimated model: " + input_id);
  }
  return it->second;
}

EstimatedModel empirical_mle_estimator(const PredictionStream& stream) {
  // counts[id][outcome index] over the stream's records
  std::map<std::string, std::vector<std::size_t>> counts;
  for (const auto& r : stream.records()) {
    if (!r.sampled_output) {
      throw DomainError("MLE estimation requires a sampled output on every record"
                        " (missing for input id " + r.input_id + ")");
    }
    auto [it, inserted] =
        counts.emplace(r.input_id, std::vector<std::size_t>(stream.space().size(), 0));
    it->second[stream.space().index_of(*r.sampled_output)] += 1;
  }

  std::map<std::string, OutcomeDistribution> by_input;
  for (const auto& [id, outcome_counts] : counts) {
    std::size_t total = 0;
    for (const std::size_t c : outcome_counts) {
      total += c;
    }
    std::vector<double> probs;
    probs.reserve(outcome_counts.size());
    for (const std::size_t c : outcome_counts) {
      probs.push_back(static_cast<double>(c) / static_cast<double>(total));
    }
    by_input.emplace(id, OutcomeDistribution(stream.space_ptr(), std::move(probs)));
  }
  return EstimatedModel(std::move(by_input));
}

double compas_decile_probability(int decile) {
  if (decile < 0 || decile > 10) {
    throw DomainError("decile must lie in [0, 10], got " + std::to_string(decile));
  }
  if (decile == 0) {
    return 0.0001;
  }
  if (decile == 10) {
    return 0.9999;
  }
  return 0.1 * static_cast<double>(decile);
}

PredictionStream disambiguate_input_ids(const PredictionStream& stream) {
  std::map<std::string, std::size_t> occurrences;
  for (const auto& r : stream.records()) {
    occurrences[r.input_id] += 1;
  }
  bool any_duplicate = false;
  for (const auto& [id, n] : occurrences) {
    any_duplicate = any_duplicate || n > 1;
  }
  if (!any_duplicate) {
    return stream;
  }

  std::set<std::string> taken;
  for (const auto& [id, n] : occurrences) {
    taken.insert(id);
  }
  std::map<std::string, std::size_t> next_suffix;
  std::vector<PredictionRecord> records = stream.records();
  for (auto& r : records) {
    if (occurrences[r.input_id] <= 1) {
      continue;
    }
    std::string fresh;
    do {
      std::ostringstream candidate;
      candidate << r.input_id << '#' << next_suffix[r.input_id]++;
      fresh = candidate.str();
    } while (!taken.insert(fresh).second);
    r.input_id = std::move(fresh);
  }
  return PredictionStream(stream.space_ptr(), std::move(records));
}

EstimatedModel compas_decile_estimator(const PredictionStream& stream) {
  if (stream.space().size() != 2 || !stream.space().contains(kRecidLabel)) {
    throw DomainError(
        "decile estimation requires a binary outcome space containing 'recid'");
  }
  const std::size_t recid_idx = stream.space().index_of(kRecidLabel);

  const PredictionStream& per_record = disambiguate_input_ids(stream);
  std::map<std::string, OutcomeDistribution> by_input;
  for (const auto& r : per_record.records()) {
    if (!r.raw_score) {
      throw DomainError("decile estimation requires a raw score on every record"
                        " (missing for input id " + r.input_id + ")");
    }
    const double raw = *r.raw_score;
    if (!(std::isfinite(raw) && std::floor(raw) == raw && raw >= 0.0 && raw <= 10.0)) {
      std::ostringstream msg;
      msg << "raw score must be an integer decile in [0, 10], got " << raw
          << " for input id " << r.input_id;
      throw DomainError(msg.str());
    }
    const double p_recid = compas_decile_probability(static_cast<int>(raw));
    std::vector<double> probs(2, 1.0 - p_recid);
    probs[recid_idx] = p_recid;
    by_input.emplace(r.input_id,
                     OutcomeDistribution(per_record.space_ptr(), std::move(probs)));
  }
  return EstimatedModel(std::move(by_input));
}

}  // namespace fairagg
