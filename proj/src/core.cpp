#include "fairagg/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace fairagg {

namespace {

bool finite_in_unit_interval(double p) {
  return std::isfinite(p) && p >= 0.0 && p <= 1.0;
}

void check_sums_to_one(double total, const char* what) {
  if (!(std::abs(total - 1.0) <= kNormalizationTol)) {
    std::ostringstream msg;
    msg << what << " must sum to 1 within " << kNormalizationTol << ", got "
        << total;
    throw DomainError(msg.str());
  }
}

}  // namespace

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels)
    : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw DomainError("outcome space needs at least two labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw DomainError("duplicate outcome label: " + labels_[i]);
    }
  }
}

bool OutcomeSpace::contains(std::string_view label) const {
  return index_.find(label) != index_.end();
}

std::size_t OutcomeSpace::index_of(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) {
    throw DomainError("label not in outcome space: " + std::string(label));
  }
  return it->second;
}

OutcomeSpacePtr make_space(std::vector<std::string> labels) {
  return std::make_shared<const OutcomeSpace>(std::move(labels));
}

OutcomeDistribution::OutcomeDistribution(OutcomeSpacePtr space,
                                         std::vector<double> probs)
    : space_(std::move(space)), probs_(std::move(probs)) {
  if (!space_) {
    throw DomainError("outcome distribution needs a space");
  }
  if (probs_.size() != space_->size()) {
    throw DomainError("probability vector length does not match outcome space");
  }
  KahanSum total;
  for (double p : probs_) {
    if (!finite_in_unit_interval(p)) {
      throw DomainError("probabilities must lie in [0, 1]");
    }
    total.add(p);
  }
  check_sums_to_one(total.value(), "outcome probabilities");
}

double OutcomeDistribution::prob(std::string_view label) const {
  return probs_[space_->index_of(label)];
}

OutcomeDistribution point_mass(OutcomeSpacePtr space, std::string_view label) {
  const std::size_t idx = space->index_of(label);
  std::vector<double> probs(space->size(), 0.0);
  probs[idx] = 1.0;
  return OutcomeDistribution(std::move(space), std::move(probs));
}

PredictionStream::PredictionStream(OutcomeSpacePtr space,
                                   std::vector<PredictionRecord> records)
    : space_(std::move(space)), records_(std::move(records)) {
  if (!space_) {
    throw DomainError("prediction stream needs an outcome space");
  }
  if (records_.empty()) {
    throw DomainError("prediction stream must contain at least one record");
  }
  std::map<std::string, const PredictionRecord*> first_seen;
  for (const auto& r : records_) {
    if (!space_->contains(r.ground_truth)) {
      throw DomainError("ground truth label not in outcome space: " +
                        r.ground_truth);
    }
    if (r.sampled_output && !space_->contains(*r.sampled_output)) {
      throw DomainError("sampled output label not in outcome space: " +
                        *r.sampled_output);
    }
    auto [it, inserted] = first_seen.emplace(r.input_id, &r);
    if (!inserted) {
      // Ground truth and group are functions of the input, so repeated
      // observations of one id must agree on both.
      if (it->second->ground_truth != r.ground_truth) {
        throw DomainError("conflicting ground truth for input id: " + r.input_id);
      }
      if (it->second->group != r.group) {
        throw DomainError("conflicting group for input id: " + r.input_id);
      }
    }
  }
}

std::vector<std::string> PredictionStream::distinct_input_ids() const {
  std::set<std::string> ids;
  for (const auto& r : records_) {
    ids.insert(r.input_id);
  }
  return {ids.begin(), ids.end()};
}

std::map<std::string, std::string> PredictionStream::ground_truth() const {
  std::map<std::string, std::string> truth;
  for (const auto& r : records_) {
    truth.emplace(r.input_id, r.ground_truth);
  }
  return truth;
}

InputDistribution::InputDistribution(std::map<std::string, double> weights)
    : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw DomainError("input distribution must not be empty");
  }
  KahanSum total;
  for (const auto& [id, w] : weights_) {
    if (!(std::isfinite(w) && w >= 0.0)) {
      throw DomainError("input weight must be finite and nonnegative: " + id);
    }
    total.add(w);
  }
  check_sums_to_one(total.value(), "input weights");
}

double InputDistribution::weight(const std::string& input_id) const {
  auto it = weights_.find(input_id);
  if (it == weights_.end()) {
    throw DomainError("input id not in distribution: " + input_id);
  }
  return it->second;
}

InputDistribution uniform_input_distribution(const PredictionStream& stream) {
  const auto ids = stream.distinct_input_ids();
  const double w = 1.0 / static_cast<double>(ids.size());
  std::map<std::string, double> weights;
  for (const auto& id : ids) {
    weights.emplace(id, w);
  }
  return InputDistribution(std::move(weights));
}

GroupPartition::GroupPartition(std::map<std::string, std::string> group_of,
                               std::string group_a, std::string group_b,
                               std::string positive_label)
    : group_of_(std::move(group_of)),
      group_a_(std::move(group_a)),
      group_b_(std::move(group_b)),
      positive_label_(std::move(positive_label)) {
  if (group_a_ == group_b_) {
    throw DomainError("the two distinguished group tags must differ");
  }
  bool has_a = false;
  bool has_b = false;
  for (const auto& [id, tag] : group_of_) {
    has_a = has_a || tag == group_a_;
    has_b = has_b || tag == group_b_;
  }
  if (!has_a || !has_b) {
    throw DomainError("both distinguished groups must be non-empty");
  }
}

const std::string& GroupPartition::group_of_id(const std::string& input_id) const {
  auto it = group_of_.find(input_id);
  if (it == group_of_.end()) {
    throw DomainError("input id not assigned to a group: " + input_id);
  }
  return it->second;
}

MeasureVector::MeasureVector(std::vector<MeasureEntry> entries,
                             std::size_t accuracy_count,
                             std::size_t fairness_count)
    : entries_(std::move(entries)),
      accuracy_count_(accuracy_count),
      fairness_count_(fairness_count) {
  if (entries_.size() != accuracy_count_ + fairness_count_) {
    throw DomainError("measure vector length must equal Q + T");
  }
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.measure_id).second) {
      throw DomainError("duplicate measure id: " + e.measure_id);
    }
  }
}

std::vector<std::string> MeasureVector::measure_ids() const {
  std::vector<std::string> ids;
  ids.reserve(entries_.size());
  for (const auto& e : entries_) {
    ids.push_back(e.measure_id);
  }
  return ids;
}

double MeasureVector::value_of(std::string_view measure_id) const {
  for (const auto& e : entries_) {
    if (e.measure_id == measure_id) {
      return e.value;
    }
  }
  throw DomainError("measure id not in vector: " + std::string(measure_id));
}

bool MeasureVector::same_schema(const MeasureVector& other) const {
  if (accuracy_count_ != other.accuracy_count_ ||
      fairness_count_ != other.fairness_count_ ||
      entries_.size() != other.entries_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].measure_id != other.entries_[i].measure_id) {
      return false;
    }
  }
  return true;
}

std::string to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::Linear: return "linear";
    case UtilityKind::ReciprocalAbs: return "reciprocal-abs";
    case UtilityKind::LogReciprocalAbs: return "log-reciprocal-abs";
    case UtilityKind::PiecewiseTable: return "piecewise-table";
  }
  throw DomainError("unknown utility kind");
}

UtilityKind utility_kind_from_name(std::string_view name) {
  if (name == "linear") return UtilityKind::Linear;
  if (name == "reciprocal-abs") return UtilityKind::ReciprocalAbs;
  if (name == "log-reciprocal-abs") return UtilityKind::LogReciprocalAbs;
  if (name == "piecewise-table") return UtilityKind::PiecewiseTable;
  throw DomainError("unknown utility kind: " + std::string(name));
}

UtilitySpec UtilitySpec::linear() { return {UtilityKind::Linear, {}}; }

UtilitySpec UtilitySpec::reciprocal_abs() {
  return {UtilityKind::ReciprocalAbs, {}};
}

UtilitySpec UtilitySpec::log_reciprocal_abs() {
  return {UtilityKind::LogReciprocalAbs, {}};
}

UtilitySpec UtilitySpec::piecewise_table(
    std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) {
    throw DomainError("piecewise table needs at least two points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
      throw DomainError("piecewise table points must be finite");
    }
    if (i > 0) {
      if (!(points[i - 1].first < points[i].first)) {
        throw DomainError("piecewise table x-coordinates must strictly increase");
      }
      if (points[i].second < points[i - 1].second) {
        throw DomainError("piecewise table must be non-decreasing");
      }
    }
  }
  return {UtilityKind::PiecewiseTable, std::move(points)};
}

UtilitySpec UtilitySpec::from_name(std::string_view name) {
  const UtilityKind kind = utility_kind_from_name(name);
  if (kind == UtilityKind::PiecewiseTable) {
    throw DomainError("piecewise-table requires explicit points");
  }
  return {kind, {}};
}

AggregationSpec::AggregationSpec(double alpha,
                                 std::map<std::string, double> weights,
                                 std::map<std::string, UtilitySpec> utilities,
                                 bool simplex_mode)
    : alpha_(alpha),
      weights_(std::move(weights)),
      utilities_(std::move(utilities)),
      simplex_mode_(simplex_mode) {
  if (!std::isfinite(alpha_)) {
    throw DomainError("alpha must be finite");
  }
  if (weights_.empty()) {
    throw DomainError("aggregation spec needs at least one measure");
  }
  if (weights_.size() != utilities_.size() ||
      !std::equal(weights_.begin(), weights_.end(), utilities_.begin(),
                  [](const auto& w, const auto& u) { return w.first == u.first; })) {
    throw DomainError("weight map and utility map must cover the same measures");
  }
  KahanSum total;
  for (const auto& [id, w] : weights_) {
    if (!std::isfinite(w)) {
      throw DomainError("weight must be finite: " + id);
    }
    if (simplex_mode_ && !(w > 0.0)) {
      throw DomainError("simplex mode requires strictly positive weights");
    }
    total.add(w);
  }
  if (simplex_mode_) {
    check_sums_to_one(total.value(), "simplex-mode weights");
  }
}

double AggregationSpec::weight_of(std::string_view measure_id) const {
  auto it = weights_.find(std::string(measure_id));
  if (it == weights_.end()) {
    throw DomainError("measure id not in aggregation spec: " +
                      std::string(measure_id));
  }
  return it->second;
}

const UtilitySpec& AggregationSpec::utility_of(std::string_view measure_id) const {
  auto it = utilities_.find(std::string(measure_id));
  if (it == utilities_.end()) {
    throw DomainError("measure id not in aggregation spec: " +
                      std::string(measure_id));
  }
  return it->second;
}

void AggregationSpec::check_covers(const MeasureVector& v) const {
  if (v.size() != weights_.size()) {
    throw DomainError("aggregation spec does not cover the measure vector");
  }
  for (const auto& e : v.entries()) {
    if (weights_.find(e.measure_id) == weights_.end()) {
      throw DomainError("measure id missing from aggregation spec: " +
                        e.measure_id);
    }
  }
}

FiniteLottery::FiniteLottery(std::vector<LotteryOutcome> support)
    : support_(std::move(support)) {
  if (support_.empty()) {
    throw DomainError("lottery support must not be empty");
  }
  KahanSum total;
  for (const auto& outcome : support_) {
    if (!(std::isfinite(outcome.probability) && outcome.probability >= 0.0)) {
      throw DomainError("lottery probabilities must be finite and nonnegative");
    }
    if (!outcome.vector.same_schema(support_.front().vector)) {
      throw DomainError("all lottery support vectors must share one schema");
    }
    total.add(outcome.probability);
  }
  check_sums_to_one(total.value(), "lottery probabilities");
}

}  // namespace fairagg
