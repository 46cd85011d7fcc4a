#include "semmap/label_distribution.hpp"

#include "semmap/errors.hpp"

#include <cmath>
#include <string>

namespace semmap {

namespace {

template <typename T>
LabelDistribution::Storage normalize_scores(std::span<const T> scores) {
  if (scores.size() != kNumLabels)
    throw InvalidArgumentError("expected " + std::to_string(kNumLabels) + " scores, got " +
                               std::to_string(scores.size()));
  LabelDistribution::Storage out{};
  double total = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    const double s = static_cast<double>(scores[i]);
    if (!std::isfinite(s) || s < 0.0)
      throw InvalidArgumentError("score " + std::to_string(i) + " is negative or non-finite");
    out[i] = s;
    total += s;
  }
  if (!(total > 0.0)) throw DegenerateDistributionError("score vector sums to zero");
  for (auto& p : out) p /= total;
  return out;
}

}  // namespace

LabelDistribution::LabelDistribution() { probs_.fill(1.0 / static_cast<double>(kNumLabels)); }

LabelDistribution LabelDistribution::one_hot(LabelIndex label) {
  if (label >= kNumLabels) throw InvalidArgumentError("label index out of range");
  Storage s{};
  s[label] = 1.0;
  return LabelDistribution(s);
}

LabelDistribution LabelDistribution::from_scores(std::span<const double> scores) {
  return LabelDistribution(normalize_scores(scores));
}

LabelDistribution LabelDistribution::from_scores(std::span<const float> scores) {
  return LabelDistribution(normalize_scores(scores));
}

LabelDistribution LabelDistribution::from_probabilities(const Storage& probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) throw ValidationError("probability is negative or non-finite");
    total += p;
  }
  if (std::abs(total - 1.0) > kSumTolerance)
    throw ValidationError("probabilities sum to " + std::to_string(total) + ", not 1");
  return LabelDistribution(probs);
}

LabelDistribution clamp_observation(const LabelDistribution& observation) {
  LabelDistribution::Storage s = observation.probs_;
  bool clamped = false;
  for (auto& p : s) {
    if (p < kObservationFloor) {
      p = kObservationFloor;
      clamped = true;
    }
  }
  if (!clamped) return observation;
  double total = 0.0;
  for (double p : s) total += p;
  for (auto& p : s) p /= total;
  return LabelDistribution(s);
}

LabelDistribution bayes_update(const LabelDistribution& prior, const LabelDistribution& observation) {
  const LabelDistribution obs = clamp_observation(observation);
  LabelDistribution::Storage post{};
  double z = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    post[i] = prior.probs_[i] * obs.probs_[i];
    z += post[i];
  }
  if (!(z >= kMinNormalizer)) throw DegenerateDistributionError("Bayes normalizer underflowed");
  for (auto& p : post) p /= z;
  return LabelDistribution(post);
}

LabelIndex map_label(const LabelDistribution& belief) {
  LabelIndex best = 0;
  for (LabelIndex i = 1; i < kNumLabels; ++i)
    if (belief[i] > belief[best]) best = i;
  return best;
}

}  // namespace semmap
