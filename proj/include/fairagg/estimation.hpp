#pragma once

#include <map>
#include <string>

#include "fairagg/core.hpp"

namespace fairagg {

/// Reconstructed predicted distribution per input id, the output of an
/// estimation function applied to a prediction stream.
class EstimatedModel {
 public:
  explicit EstimatedModel(std::map<std::string, OutcomeDistribution> by_input);

  const std::map<std::string, OutcomeDistribution>& distributions() const {
    return by_input_;
  }
  /// Distribution for `input_id`; DomainError if absent.
  const OutcomeDistribution& at(const std::string& input_id) const;
  std::size_t size() const { return by_input_.size(); }

 private:
  std::map<std::string, OutcomeDistribution> by_input_;
};

/// Maximum-likelihood estimate: for each distinct input id, the empirical
/// frequency of its sampled outputs. Every record must carry a sampled
/// output.
EstimatedModel empirical_mle_estimator(const PredictionStream& stream);

/// Probability of re-offending implied by a COMPAS decile in [0, 10]:
/// 0.0001 at decile 0, 0.9999 at decile 10, decile/10 otherwise.
double compas_decile_probability(int decile);

/// Outcome label conventions for the COMPAS decile estimator's binary space.
inline constexpr const char* kRecidLabel = "recid";
inline constexpr const char* kNoRecidLabel = "no_recid";

/// Decile-to-probability estimator. Every record must carry an integer
/// raw_score in [0, 10]; the stream's space must be binary and contain the
/// "recid" label, which receives compas_decile_probability(decile). Records
/// are treated as independent evaluation units: when an input id repeats, the
/// model is keyed by the ids produced by disambiguate_input_ids.
EstimatedModel compas_decile_estimator(const PredictionStream& stream);

/// Rewrites duplicate input ids so every record gets its own id ("id#k" for
/// the k-th occurrence, 0-based). Streams without duplicates come back
/// unchanged. Use this to build ground truth and input distributions that
/// line up with compas_decile_estimator on duplicate-id streams.
PredictionStream disambiguate_input_ids(const PredictionStream& stream);

}  // namespace fairagg
