#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fairagg/scoring.hpp"
#include "support/oracles.hpp"

using namespace fairagg;
using doctest::Approx;

namespace {

OutcomeDistribution binary(double p0, double p1) {
  return OutcomeDistribution(make_space({"0", "1"}), {p0, p1});
}

}  // namespace

TEST_SUITE("scoring") {

TEST_CASE("rule names round-trip") {
  CHECK(to_string(ScoringRule::Brier) == "brier");
  CHECK(to_string(ScoringRule::Logarithmic) == "log");
  CHECK(to_string(ScoringRule::Spherical) == "spherical");
  CHECK(scoring_rule_from_name("brier") == ScoringRule::Brier);
  CHECK(scoring_rule_from_name("log") == ScoringRule::Logarithmic);
  CHECK(scoring_rule_from_name("spherical") == ScoringRule::Spherical);
  CHECK_THROWS_AS(scoring_rule_from_name("quadratic"), DomainError);
}

TEST_CASE("brier score") {
  auto space = make_space({"0", "1"});
  CHECK(brier_score(point_mass(space, "1"), "1") == 0.0);
  CHECK(brier_score(binary(0.5, 0.5), "1") == Approx(-0.5).epsilon(1e-12));
  CHECK(brier_score(binary(0.2, 0.8), "1") == Approx(-0.08).epsilon(1e-12));
  CHECK(brier_score(point_mass(space, "0"), "1") == Approx(-2.0).epsilon(1e-12));
  // three outcomes: -( (0.5)^2 + (0.3-1)^2 + (0.2)^2 ) = -0.78
  const OutcomeDistribution tri(make_space({"a", "b", "c"}), {0.5, 0.3, 0.2});
  CHECK(brier_score(tri, "b") == Approx(-0.78).epsilon(1e-12));
  CHECK_THROWS_AS(brier_score(binary(0.5, 0.5), "2"), DomainError);
}

TEST_CASE("log score") {
  auto space = make_space({"0", "1"});
  CHECK(log_score(point_mass(space, "1"), "1") == 0.0);
  CHECK(log_score(binary(0.5, 0.5), "0") ==
        Approx(-0.6931471805599453).epsilon(1e-14));
  CHECK(log_score(binary(0.2, 0.8), "1") ==
        Approx(-0.2231435513142097).epsilon(1e-14));
  CHECK_THROWS_AS(log_score(binary(1.0, 0.0), "1"), ZeroProbabilityError);
  CHECK_THROWS_AS(log_score(binary(1.0, 0.0), "1", LogZeroPolicy::Fail),
                  ZeroProbabilityError);
  CHECK(log_score(binary(1.0, 0.0), "1", LogZeroPolicy::Floor) ==
        Approx(-23.025850929940457).epsilon(1e-14));
}

TEST_CASE("spherical score") {
  auto space = make_space({"0", "1"});
  CHECK(spherical_score(point_mass(space, "1"), "1") == 1.0);
  CHECK(spherical_score(point_mass(space, "0"), "1") == 0.0);
  CHECK(spherical_score(binary(0.5, 0.5), "1") ==
        Approx(0.7071067811865475).epsilon(1e-14));
  CHECK(spherical_score(binary(0.2, 0.8), "1") ==
        Approx(0.9701425001453318).epsilon(1e-14));
  CHECK(spherical_score(binary(0.2, 0.8), "0") ==
        Approx(0.24253562503633294).epsilon(1e-14));
}

TEST_CASE("dispatch matches the per-rule functions") {
  const auto d = binary(0.3, 0.7);
  CHECK(score(ScoringRule::Brier, d, "1") == brier_score(d, "1"));
  CHECK(score(ScoringRule::Logarithmic, d, "1") == log_score(d, "1"));
  CHECK(score(ScoringRule::Spherical, d, "1") == spherical_score(d, "1"));
  CHECK(score(ScoringRule::Logarithmic, binary(1.0, 0.0), "1",
              LogZeroPolicy::Floor) ==
        log_score(binary(1.0, 0.0), "1", LogZeroPolicy::Floor));
}

TEST_CASE("scores match the naive oracle on random distributions") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t size = 2 + rng.below(4);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < size; ++i) {
      labels.push_back("y" + std::to_string(i));
    }
    const auto probs = oracle::random_probs(rng, size);
    const OutcomeDistribution d(make_space(labels), probs);
    const std::size_t truth = rng.below(size);
    for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                            ScoringRule::Spherical}) {
      const double got = score(rule, d, labels[truth]);
      const double want = oracle::naive_score(rule, probs, truth);
      CHECK(std::fabs(got - want) <= 1e-12);
    }
  }
}

TEST_CASE("score bounds on random distributions") {
  oracle::Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const auto probs = oracle::random_probs(rng, 3);
    const OutcomeDistribution d(make_space({"a", "b", "c"}), probs);
    const std::size_t truth = rng.below(3);
    const std::string label = d.space().labels()[truth];
    const double b = brier_score(d, label);
    CHECK(b <= 0.0);
    CHECK(b >= -2.0);
    CHECK(log_score(d, label) <= 0.0);
    const double s = spherical_score(d, label);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("raising the truth's probability raises every score") {
  // Move mass from the wrong outcome onto the truth; all three rules must
  // strictly prefer the better forecast.
  auto space = make_space({"0", "1"});
  for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                          ScoringRule::Spherical}) {
    double previous = score(rule, binary(0.9, 0.1), "1");
    for (double p1 = 0.2; p1 < 1.0001; p1 += 0.1) {
      const double current = score(rule, binary(1.0 - p1, p1), "1");
      CHECK(current > previous);
      previous = current;
    }
  }
}

TEST_CASE("scores are invariant under label permutation") {
  const std::vector<double> probs{0.5, 0.3, 0.2};
  const OutcomeDistribution d(make_space({"a", "b", "c"}), probs);
  const OutcomeDistribution permuted(make_space({"c", "a", "b"}),
                                     {0.2, 0.5, 0.3});
  for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                          ScoringRule::Spherical}) {
    CHECK(score(rule, d, "b") == score(rule, permuted, "b"));
  }
}

TEST_CASE("propriety of the shipped rules on the binary grid") {
  const OutcomeSpace binary_space({"0", "1"});
  for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                          ScoringRule::Spherical}) {
    const auto report = check_strict_propriety(rule, binary_space, 0.05);
    CAPTURE(to_string(rule));
    CHECK(report.is_proper);
    CHECK(report.worst_violation <= -1e-12);
  }
}

TEST_CASE("propriety on a three-outcome grid") {
  const OutcomeSpace tri({"a", "b", "c"});
  for (const auto rule : {ScoringRule::Brier, ScoringRule::Logarithmic,
                          ScoringRule::Spherical}) {
    const auto report = check_strict_propriety(rule, tri, 0.1);
    CAPTURE(to_string(rule));
    CHECK(report.is_proper);
  }
}

TEST_CASE("spherical without the squared denominator is not proper") {
  // Dividing by sum(p) instead of sqrt(sum(p^2)) leaves the expected score
  // linear in p, so it is maximized at a point mass rather than at p = q.
  const ScoreFn unsquared = [](const OutcomeDistribution& p,
                               std::string_view outcome) {
    double denom = 0.0;
    for (const double value : p.probs()) {
      denom += value;
    }
    return p.prob(outcome) / std::sqrt(denom);
  };
  const auto report = check_strict_propriety(unsquared, OutcomeSpace({"0", "1"}),
                                             0.05, /*interior_only=*/false);
  CHECK_FALSE(report.is_proper);
  CHECK(report.worst_violation > -1e-12);
}

TEST_CASE("propriety checker input validation") {
  const OutcomeSpace binary_space({"0", "1"});
  CHECK_THROWS_AS(check_strict_propriety(ScoringRule::Brier, binary_space, 0.0),
                  DomainError);
  CHECK_THROWS_AS(check_strict_propriety(ScoringRule::Brier, binary_space, 0.2),
                  DomainError);
  CHECK_THROWS_AS(check_strict_propriety(ScoringRule::Brier, binary_space, -0.05),
                  DomainError);
  const OutcomeSpace four({"a", "b", "c", "d"});
  CHECK_THROWS_AS(check_strict_propriety(ScoringRule::Brier, four, 0.05),
                  DomainError);
}

}  // TEST_SUITE
