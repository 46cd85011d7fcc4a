#pragma once

#include "semmap/labels.hpp"

#include <array>
#include <span>

namespace semmap {

/// Observation entries below this floor are raised to it before fusion, so a
/// single zero score cannot permanently eliminate a class.
inline constexpr double kObservationFloor = 1e-6;

/// Normalization constant below which an update is considered degenerate.
inline constexpr double kMinNormalizer = 1e-300;

/// Tolerance on the sum-to-one invariant.
inline constexpr double kSumTolerance = 1e-9;

/// Categorical distribution over the 19 semantic classes.
///
/// Always normalized: every constructor and every update leaves entries
/// non-negative and summing to one within kSumTolerance.
class LabelDistribution {
 public:
  using Storage = std::array<double, kNumLabels>;

  /// Uniform distribution.
  LabelDistribution();

  static LabelDistribution uniform() { return {}; }
  static LabelDistribution one_hot(LabelIndex label);

  /// Normalizes raw non-negative scores. Throws InvalidArgumentError on
  /// negative or non-finite input and DegenerateDistributionError when
  /// the scores sum to zero.
  static LabelDistribution from_scores(std::span<const double> scores);
  static LabelDistribution from_scores(std::span<const float> scores);

  /// Stores an already-normalized vector verbatim (used when reloading saved
  /// beliefs). Throws ValidationError if it is not a valid distribution.
  static LabelDistribution from_probabilities(const Storage& probs);

  double operator[](LabelIndex i) const { return probs_[i]; }
  const Storage& probs() const { return probs_; }

  friend bool operator==(const LabelDistribution&, const LabelDistribution&) = default;

 private:
  explicit LabelDistribution(const Storage& normalized) : probs_(normalized) {}

  Storage probs_;

  friend LabelDistribution bayes_update(const LabelDistribution&, const LabelDistribution&);
  friend LabelDistribution clamp_observation(const LabelDistribution&);
};

/// Raises entries below kObservationFloor to the floor and renormalizes.
LabelDistribution clamp_observation(const LabelDistribution& observation);

/// One recursive Bayes step: posterior ∝ prior ⊙ clamp(observation).
/// Throws DegenerateDistributionError if the normalizer underflows.
LabelDistribution bayes_update(const LabelDistribution& prior, const LabelDistribution& observation);

/// Most probable class; ties go to the lowest index.
LabelIndex map_label(const LabelDistribution& belief);

}  // namespace semmap
