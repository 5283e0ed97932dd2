#include "fairagg/json_io.hpp"

#include <utility>

namespace fairagg {

namespace {

const json& require_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw SchemaError(std::string("missing field: ") + key);
  }
  return *it;
}

}  // namespace

json to_json(const OutcomeSpace& space) {
  return json{{"labels", space.labels()}};
}

OutcomeSpace outcome_space_from_json(const json& j) {
  return OutcomeSpace(require_field(j, "labels").get<std::vector<std::string>>());
}

json to_json(const OutcomeDistribution& dist) {
  json probs = json::object();
  const auto& labels = dist.space().labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    probs[labels[i]] = dist.prob_at(i);
  }
  return json{{"space", to_json(dist.space())}, {"probs", std::move(probs)}};
}

OutcomeDistribution outcome_distribution_from_json(const json& j) {
  auto space = make_space(
      require_field(require_field(j, "space"), "labels").get<std::vector<std::string>>());
  const json& probs_obj = require_field(j, "probs");
  std::vector<double> probs;
  probs.reserve(space->size());
  for (const auto& label : space->labels()) {
    probs.push_back(require_field(probs_obj, label.c_str()).get<double>());
  }
  return OutcomeDistribution(std::move(space), std::move(probs));
}

json to_json(const PredictionRecord& record) {
  json j{{"input_id", record.input_id}};
  if (record.sampled_output) {
    j["sampled_output"] = *record.sampled_output;
  }
  if (record.raw_score) {
    j["raw_score"] = *record.raw_score;
  }
  j["ground_truth"] = record.ground_truth;
  if (record.group) {
    j["group"] = *record.group;
  }
  return j;
}

PredictionRecord prediction_record_from_json(const json& j) {
  PredictionRecord r;
  r.input_id = require_field(j, "input_id").get<std::string>();
  if (auto it = j.find("sampled_output"); it != j.end() && !it->is_null()) {
    r.sampled_output = it->get<std::string>();
  }
  if (auto it = j.find("raw_score"); it != j.end() && !it->is_null()) {
    r.raw_score = it->get<double>();
  }
  r.ground_truth = require_field(j, "ground_truth").get<std::string>();
  if (auto it = j.find("group"); it != j.end() && !it->is_null()) {
    r.group = it->get<std::string>();
  }
  return r;
}

json to_json(const PredictionStream& stream) {
  json records = json::array();
  for (const auto& r : stream.records()) {
    records.push_back(to_json(r));
  }
  return json{{"space", to_json(stream.space())}, {"records", std::move(records)}};
}

PredictionStream prediction_stream_from_json(const json& j) {
  auto space = make_space(
      require_field(require_field(j, "space"), "labels").get<std::vector<std::string>>());
  std::vector<PredictionRecord> records;
  for (const auto& rj : require_field(j, "records")) {
    records.push_back(prediction_record_from_json(rj));
  }
  return PredictionStream(std::move(space), std::move(records));
}

json to_json(const InputDistribution& dist) {
  json weights = json::object();
  for (const auto& [id, w] : dist.weights()) {
    weights[id] = w;
  }
  return json{{"weights", std::move(weights)}};
}

InputDistribution input_distribution_from_json(const json& j) {
  std::map<std::string, double> weights;
  for (const auto& [id, w] : require_field(j, "weights").items()) {
    weights.emplace(id, w.get<double>());
  }
  return InputDistribution(std::move(weights));
}

json to_json(const GroupPartition& partition) {
  json group_of = json::object();
  for (const auto& [id, tag] : partition.group_of()) {
    group_of[id] = tag;
  }
  return json{{"group_of", std::move(group_of)},
              {"groups", json::array({partition.group_a(), partition.group_b()})},
              {"positive_label", partition.positive_label()}};
}

GroupPartition group_partition_from_json(const json& j) {
  std::map<std::string, std::string> group_of;
  for (const auto& [id, tag] : require_field(j, "group_of").items()) {
    group_of.emplace(id, tag.get<std::string>());
  }
  const json& groups = require_field(j, "groups");
  if (!groups.is_array() || groups.size() != 2) {
    throw DomainError("groups must be an array of exactly two tags");
  }
  return GroupPartition(std::move(group_of), groups[0].get<std::string>(),
                        groups[1].get<std::string>(),
                        require_field(j, "positive_label").get<std::string>());
}

json to_json(const MeasureVector& v) {
  json entries = json::array();
  for (const auto& e : v.entries()) {
    entries.push_back(json{{"measure_id", e.measure_id}, {"value", e.value}});
  }
  return json{{"entries", std::move(entries)},
              {"accuracy_count", v.accuracy_count()},
              {"fairness_count", v.fairness_count()}};
}

MeasureVector measure_vector_from_json(const json& j) {
  std::vector<MeasureEntry> entries;
  for (const auto& ej : require_field(j, "entries")) {
    entries.push_back({require_field(ej, "measure_id").get<std::string>(),
                       require_field(ej, "value").get<double>()});
  }
  return MeasureVector(std::move(entries),
                       require_field(j, "accuracy_count").get<std::size_t>(),
                       require_field(j, "fairness_count").get<std::size_t>());
}

json to_json(const UtilitySpec& spec) {
  json j{{"kind", to_string(spec.kind())}};
  if (spec.kind() == UtilityKind::PiecewiseTable) {
    json points = json::array();
    for (const auto& [x, u] : spec.points()) {
      points.push_back(json::array({x, u}));
    }
    j["points"] = std::move(points);
  }
  return j;
}

UtilitySpec utility_spec_from_json(const json& j) {
  const auto kind = utility_kind_from_name(require_field(j, "kind").get<std::string>());
  if (kind == UtilityKind::PiecewiseTable) {
    std::vector<std::pair<double, double>> points;
    for (const auto& pj : require_field(j, "points")) {
      if (!pj.is_array() || pj.size() != 2) {
        throw DomainError("piecewise table point must be a [x, u] pair");
      }
      points.emplace_back(pj[0].get<double>(), pj[1].get<double>());
    }
    return UtilitySpec::piecewise_table(std::move(points));
  }
  return UtilitySpec::from_name(require_field(j, "kind").get<std::string>());
}

json to_json(const AggregationSpec& spec) {
  json weights = json::object();
  for (const auto& [id, w] : spec.weights()) {
    weights[id] = w;
  }
  json utilities = json::object();
  for (const auto& [id, u] : spec.utilities()) {
    utilities[id] = to_json(u);
  }
  return json{{"alpha", spec.alpha()},
              {"weights", std::move(weights)},
              {"utilities", std::move(utilities)},
              {"simplex_mode", spec.simplex_mode()}};
}

AggregationSpec aggregation_spec_from_json(const json& j) {
  std::map<std::string, double> weights;
  for (const auto& [id, w] : require_field(j, "weights").items()) {
    weights.emplace(id, w.get<double>());
  }
  std::map<std::string, UtilitySpec> utilities;
  for (const auto& [id, uj] : require_field(j, "utilities").items()) {
    utilities.emplace(id, utility_spec_from_json(uj));
  }
  bool simplex_mode = false;
  if (auto it = j.find("simplex_mode"); it != j.end()) {
    simplex_mode = it->get<bool>();
  }
  return AggregationSpec(require_field(j, "alpha").get<double>(),
                         std::move(weights), std::move(utilities), simplex_mode);
}

json to_json(const FiniteLottery& lottery) {
  json support = json::array();
  for (const auto& outcome : lottery.support()) {
    support.push_back(json{{"vector", to_json(outcome.vector)},
                           {"probability", outcome.probability}});
  }
  return json{{"support", std::move(support)}};
}

FiniteLottery finite_lottery_from_json(const json& j) {
  std::vector<LotteryOutcome> support;
  for (const auto& oj : require_field(j, "support")) {
    support.push_back({measure_vector_from_json(require_field(oj, "vector")),
                       require_field(oj, "probability").get<double>()});
  }
  return FiniteLottery(std::move(support));
}

}  // namespace fairagg
