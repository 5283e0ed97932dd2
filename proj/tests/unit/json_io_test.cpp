#include <doctest.h>

#include <string>
#include <vector>

#include "fairagg/json_io.hpp"
#include "support/oracles.hpp"

using namespace fairagg;

namespace {

PredictionStream sample_stream() {
  auto space = make_space({"no", "yes"});
  return PredictionStream(space, {
      {"a", "yes", 3.0, "yes", "g1"},
      {"b", std::nullopt, std::nullopt, "no", "g2"},
      {"a", "no", 4.0, "yes", "g1"},
  });
}

}  // namespace

TEST_SUITE("json_io") {

TEST_CASE("outcome space round trip") {
  const OutcomeSpace space({"no", "yes", "maybe"});
  const auto j = to_json(space);
  CHECK(outcome_space_from_json(j) == space);
  CHECK(j.dump() == R"({"labels":["no","yes","maybe"]})");
}

TEST_CASE("distribution round trip is bit exact") {
  oracle::Rng rng(71);
  auto space = make_space({"a", "b", "c"});
  for (int trial = 0; trial < 100; ++trial) {
    const OutcomeDistribution d(space, oracle::random_probs(rng, 3));
    const auto back = outcome_distribution_from_json(to_json(d));
    REQUIRE(back.probs().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back.probs()[i] == d.probs()[i]);  // exact, not approximate
    }
  }
}

TEST_CASE("prediction record round trip keeps optional fields") {
  const PredictionRecord full{"a", "yes", 7.0, "yes", "g1"};
  CHECK(prediction_record_from_json(to_json(full)) == full);
  const PredictionRecord sparse{"b", std::nullopt, std::nullopt, "no",
                                std::nullopt};
  CHECK(prediction_record_from_json(to_json(sparse)) == sparse);
}

TEST_CASE("prediction stream round trip") {
  const auto stream = sample_stream();
  CHECK(prediction_stream_from_json(to_json(stream)) == stream);
}

TEST_CASE("input distribution round trip") {
  const InputDistribution p({{"a", 0.25}, {"b", 0.75}});
  CHECK(input_distribution_from_json(to_json(p)) == p);
}

TEST_CASE("group partition round trip") {
  const GroupPartition partition({{"a", "g1"}, {"b", "g2"}}, "g1", "g2", "no");
  CHECK(group_partition_from_json(to_json(partition)) == partition);
}

TEST_CASE("measure vector round trip keeps order and split") {
  const MeasureVector v(
      {{"brier", -0.459}, {"log", -0.740}, {"eqopp", -0.145}}, 2, 1);
  const auto back = measure_vector_from_json(to_json(v));
  CHECK(back == v);
  CHECK(back.accuracy_count() == 2);
  CHECK(back.fairness_count() == 1);
  CHECK(back.measure_ids() ==
        std::vector<std::string>{"brier", "log", "eqopp"});
}

TEST_CASE("utility spec round trip for every kind") {
  for (const auto& spec :
       {UtilitySpec::linear(), UtilitySpec::reciprocal_abs(),
        UtilitySpec::log_reciprocal_abs(),
        UtilitySpec::piecewise_table({{-1.0, 0.0}, {0.0, 2.5}})}) {
    CHECK(utility_spec_from_json(to_json(spec)) == spec);
  }
}

TEST_CASE("aggregation spec round trip") {
  const AggregationSpec spec(
      0.5, {{"a", 0.25}, {"b", 0.75}},
      {{"a", UtilitySpec::linear()}, {"b", UtilitySpec::reciprocal_abs()}},
      /*simplex_mode=*/true);
  const auto back = aggregation_spec_from_json(to_json(spec));
  CHECK(back == spec);
  CHECK(back.simplex_mode());
}

TEST_CASE("finite lottery round trip") {
  const MeasureVector lo({{"m", -0.5}}, 1, 0);
  const MeasureVector hi({{"m", -0.25}}, 1, 0);
  const FiniteLottery lottery({{lo, 0.25}, {hi, 0.75}});
  CHECK(finite_lottery_from_json(to_json(lottery)) == lottery);
}

TEST_CASE("encoding key order is stable") {
  const auto j = to_json(sample_stream().records()[0]);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) {
    keys.push_back(it.key());
  }
  CHECK(keys == std::vector<std::string>{"input_id", "sampled_output",
                                         "raw_score", "ground_truth", "group"});
  // two encodings of the same value are byte-identical
  CHECK(to_json(sample_stream()).dump(2) == to_json(sample_stream()).dump(2));
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(outcome_space_from_json(json::parse(R"({"wrong":[]})")),
                  SchemaError);
  CHECK_THROWS_AS(
      outcome_distribution_from_json(json::parse(R"({"labels":["a","b"]})")),
      SchemaError);
  CHECK_THROWS_AS(
      measure_vector_from_json(json::parse(R"({"entries":[]})")),
      SchemaError);
  CHECK_THROWS_AS(utility_spec_from_json(json::parse(R"({"kind":"cubic"})")),
                  DomainError);
}

}  // TEST_SUITE
