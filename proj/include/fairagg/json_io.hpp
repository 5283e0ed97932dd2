#pragma once

#include <json.hpp>

#include "fairagg/core.hpp"

// Canonical JSON encodings for the core types. Keys are lowercase snake
// case; object key order is fixed, so encoding is deterministic. Doubles
// survive an encode/decode round trip bit-exactly.

namespace fairagg {

using json = nlohmann::ordered_json;

json to_json(const OutcomeSpace& space);
json to_json(const OutcomeDistribution& dist);
json to_json(const PredictionRecord& record);
json to_json(const PredictionStream& stream);
json to_json(const InputDistribution& dist);
json to_json(const GroupPartition& partition);
json to_json(const MeasureVector& v);
json to_json(const UtilitySpec& spec);
json to_json(const AggregationSpec& spec);
json to_json(const FiniteLottery& lottery);

OutcomeSpace outcome_space_from_json(const json& j);
OutcomeDistribution outcome_distribution_from_json(const json& j);
PredictionRecord prediction_record_from_json(const json& j);
PredictionStream prediction_stream_from_json(const json& j);
InputDistribution input_distribution_from_json(const json& j);
GroupPartition group_partition_from_json(const json& j);
MeasureVector measure_vector_from_json(const json& j);
UtilitySpec utility_spec_from_json(const json& j);
AggregationSpec aggregation_spec_from_json(const json& j);
FiniteLottery finite_lottery_from_json(const json& j);

}  // namespace fairagg
