#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairagg/error.hpp"

namespace fairagg {

/// Absolute tolerance used everywhere a probability vector must sum to one.
inline constexpr double kNormalizationTol = 1e-9;

/// Compensated (Kahan) accumulator. Every stream-wide reduction in the
/// library runs through one of these, in a fixed iteration order, so reports
/// are bit-stable from run to run.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Finite, ordered outcome space. Labels are opaque strings; at least two,
/// all distinct.
class OutcomeSpace {
 public:
  explicit OutcomeSpace(std::vector<std::string> labels);

  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }
  bool contains(std::string_view label) const;
  /// Index of `label` in declaration order; DomainError if unknown.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const OutcomeSpace& a, const OutcomeSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using OutcomeSpacePtr = std::shared_ptr<const OutcomeSpace>;

OutcomeSpacePtr make_space(std::vector<std::string> labels);

/// A probability distribution over a finite outcome space. Probabilities are
/// stored in label declaration order, each in [0, 1], summing to one within
/// kNormalizationTol. Immutable after construction.
class OutcomeDistribution {
 public:
  OutcomeDistribution(OutcomeSpacePtr space, std::vector<double> probs);

  const OutcomeSpace& space() const { return *space_; }
  const OutcomeSpacePtr& space_ptr() const { return space_; }
  const std::vector<double>& probs() const { return probs_; }
  double prob_at(std::size_t index) const { return probs_.at(index); }
  /// Probability of `label`; DomainError if the label is not in the space.
  double prob(std::string_view label) const;

  friend bool operator==(const OutcomeDistribution& a,
                         const OutcomeDistribution& b) {
    return *a.space_ == *b.space_ && a.probs_ == b.probs_;
  }

 private:
  OutcomeSpacePtr space_;
  std::vector<double> probs_;
};

/// Distribution assigning probability one to `label`.
OutcomeDistribution point_mass(OutcomeSpacePtr space, std::string_view label);

/// One recorded prediction event. `sampled_output` is the outcome the
/// algorithm emitted (absent when only a raw score was logged); `raw_score`
/// carries scores such as a COMPAS decile.
struct PredictionRecord {
  std::string input_id;
  std::optional<std::string> sampled_output;
  std::optional<double> raw_score;
  std::string ground_truth;
  std::optional<std::string> group;

  friend bool operator==(const PredictionRecord&,
                         const PredictionRecord&) = default;
};

/// Non-empty sequence of prediction records over one outcome space.
/// Duplicate input ids are allowed (the same input observed repeatedly), but
/// every occurrence must agree on ground truth and group.
class PredictionStream {
 public:
  PredictionStream(OutcomeSpacePtr space, std::vector<PredictionRecord> records);

  const OutcomeSpace& space() const { return *space_; }
  const OutcomeSpacePtr& space_ptr() const { return space_; }
  const std::vector<PredictionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  /// Distinct input ids in sorted order.
  std::vector<std::string> distinct_input_ids() const;
  /// Ground-truth function restricted to the observed inputs.
  std::map<std::string, std::string> ground_truth() const;

  friend bool operator==(const PredictionStream& a, const PredictionStream& b) {
    return *a.space_ == *b.space_ && a.records_ == b.records_;
  }

 private:
  OutcomeSpacePtr space_;
  std::vector<PredictionRecord> records_;
};

/// Probability distribution over input ids: nonnegative weights summing to
/// one within kNormalizationTol. Which ids make up the domain is checked by
/// the operations that pair it with a stream or model.
class InputDistribution {
 public:
  explicit InputDistribution(std::map<std::string, double> weights);

  const std::map<std::string, double>& weights() const { return weights_; }
  /// Weight of `input_id`; DomainError if absent.
  double weight(const std::string& input_id) const;
  std::size_t size() const { return weights_.size(); }

  friend bool operator==(const InputDistribution& a,
                         const InputDistribution& b) {
    return a.weights_ == b.weights_;
  }

 private:
  std::map<std::string, double> weights_;
};

/// Uniform distribution over the stream's distinct input ids.
InputDistribution uniform_input_distribution(const PredictionStream& stream);

/// Assignment of input ids to group tags, with two distinguished tags and the
/// outcome label counted as the positive class. More than two tags may appear
/// in the assignment; the distinguished pair is what EqOpp compares.
class GroupPartition {
 public:
  GroupPartition(std::map<std::string, std::string> group_of,
                 std::string group_a, std::string group_b,
                 std::string positive_label);

  const std::map<std::string, std::string>& group_of() const {
    return group_of_;
  }
  const std::string& group_a() const { return group_a_; }
  const std::string& group_b() const { return group_b_; }
  const std::string& positive_label() const { return positive_label_; }
  /// Tag of `input_id`; DomainError if the id is not assigned.
  const std::string& group_of_id(const std::string& input_id) const;

  friend bool operator==(const GroupPartition&, const GroupPartition&) = default;

 private:
  std::map<std::string, std::string> group_of_;
  std::string group_a_;
  std::string group_b_;
  std::string positive_label_;
};

struct MeasureEntry {
  std::string measure_id;
  double value = 0.0;

  friend bool operator==(const MeasureEntry&, const MeasureEntry&) = default;
};

/// Ordered vector of measure values. The first `accuracy_count` entries are
/// accuracy measures, the remaining `fairness_count` are fairness measures.
class MeasureVector {
 public:
  MeasureVector(std::vector<MeasureEntry> entries, std::size_t accuracy_count,
                std::size_t fairness_count);

  const std::vector<MeasureEntry>& entries() const { return entries_; }
  std::size_t accuracy_count() const { return accuracy_count_; }
  std::size_t fairness_count() const { return fairness_count_; }
  std::size_t size() const { return entries_.size(); }

  std::vector<std::string> measure_ids() const;
  /// Value of the measure named `measure_id`; DomainError if absent.
  double value_of(std::string_view measure_id) const;
  /// True when both vectors list the same measure ids in the same order with
  /// the same accuracy/fairness split.
  bool same_schema(const MeasureVector& other) const;

  friend bool operator==(const MeasureVector&, const MeasureVector&) = default;

 private:
  std::vector<MeasureEntry> entries_;
  std::size_t accuracy_count_;
  std::size_t fairness_count_;
};

enum class UtilityKind { Linear, ReciprocalAbs, LogReciprocalAbs, PiecewiseTable };

std::string to_string(UtilityKind kind);
/// Parses "linear" | "reciprocal-abs" | "log-reciprocal-abs" |
/// "piecewise-table"; DomainError otherwise.
UtilityKind utility_kind_from_name(std::string_view name);

/// A monotone utility function over one measure's value.
///
/// Linear            u(r) = r
/// ReciprocalAbs     u(r) = 1/|r|        (undefined at r = 0)
/// LogReciprocalAbs  u(r) = ln(1/|r|)    (undefined at r = 0)
/// PiecewiseTable    linear interpolation through (x, u) points with strictly
///                   increasing x and non-decreasing u; clamped outside the
///                   table's x-range.
class UtilitySpec {
 public:
  static UtilitySpec linear();
  static UtilitySpec reciprocal_abs();
  static UtilitySpec log_reciprocal_abs();
  static UtilitySpec piecewise_table(std::vector<std::pair<double, double>> points);
  /// Spec for a parameter-free kind named by `name` (see utility_kind_from_name).
  static UtilitySpec from_name(std::string_view name);

  UtilityKind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& points() const { return points_; }

  friend bool operator==(const UtilitySpec&, const UtilitySpec&) = default;

 private:
  UtilitySpec(UtilityKind kind, std::vector<std::pair<double, double>> points)
      : kind_(kind), points_(std::move(points)) {}

  UtilityKind kind_;
  std::vector<std::pair<double, double>> points_;  // PiecewiseTable only
};

/// Constant plus per-measure weight and utility: everything needed to turn a
/// MeasureVector into one overall value. In simplex mode all weights must be
/// strictly positive and sum to one within kNormalizationTol.
class AggregationSpec {
 public:
  AggregationSpec(double alpha, std::map<std::string, double> weights,
                  std::map<std::string, UtilitySpec> utilities,
                  bool simplex_mode = false);

  double alpha() const { return alpha_; }
  const std::map<std::string, double>& weights() const { return weights_; }
  const std::map<std::string, UtilitySpec>& utilities() const {
    return utilities_;
  }
  bool simplex_mode() const { return simplex_mode_; }

  double weight_of(std::string_view measure_id) const;
  const UtilitySpec& utility_of(std::string_view measure_id) const;
  /// DomainError unless this covers exactly the vector's measure ids.
  void check_covers(const MeasureVector& v) const;

  friend bool operator==(const AggregationSpec&, const AggregationSpec&) = default;

 private:
  double alpha_;
  std::map<std::string, double> weights_;
  std::map<std::string, UtilitySpec> utilities_;
  bool simplex_mode_;
};

struct LotteryOutcome {
  MeasureVector vector;
  double probability = 0.0;

  friend bool operator==(const LotteryOutcome&, const LotteryOutcome&) = default;
};

/// Finite-support probability distribution over measure vectors. All support
/// vectors share one measure schema; probabilities are nonnegative and sum to
/// one within kNormalizationTol.
class FiniteLottery {
 public:
  explicit FiniteLottery(std::vector<LotteryOutcome> support);

  const std::vector<LotteryOutcome>& support() const { return support_; }
  std::size_t size() const { return support_.size(); }
  const MeasureVector& schema() const { return support_.front().vector; }

  friend bool operator==(const FiniteLottery&, const FiniteLottery&) = default;

 private:
  std::vector<LotteryOutcome> support_;
};

}  // namespace fairagg
