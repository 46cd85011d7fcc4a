#include <doctest.h>

#include "oracles.hpp"
#include "semmap/errors.hpp"
#include "semmap/label_distribution.hpp"
#include "semmap/labels.hpp"
#include "semmap/synth.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace semmap;
using semmap::testing::brute_force_product;
using semmap::testing::linf;
using semmap::testing::random_simplex;

namespace {

LabelDistribution dist(const std::array<double, kNumLabels>& p) { return LabelDistribution::from_scores(std::span<const double>(p)); }

std::array<double, kNumLabels> floor_filled(std::initializer_list<std::pair<std::size_t, double>> head) {
  std::array<double, kNumLabels> a;
  a.fill(1e-6);
  for (auto [i, v] : head) a[i] = v;
  return a;
}

void check_valid(const LabelDistribution& d) {
  double s = 0.0;
  for (double v : d.probs()) {
    REQUIRE(v >= 0.0);
    s += v;
  }
  REQUIRE(std::abs(s - 1.0) <= kSumTolerance);
}

}  // namespace

TEST_CASE("label table") {
  CHECK(label_names().size() == 19);
  CHECK(label_name(0) == "road");
  CHECK(label_name(18) == "bicycle");
  CHECK(label_from_name("sky") == LabelIndex{10});
  CHECK_FALSE(label_from_name("tree").has_value());
  CHECK(label_color(0) == Rgb{128, 64, 128});
  CHECK(label_color(10) == Rgb{70, 130, 180});
  CHECK(label_color(13) == Rgb{0, 0, 142});
  CHECK_THROWS_AS(label_color(19), InvalidArgumentError);
}

TEST_CASE("constructors") {
  const auto u = LabelDistribution::uniform();
  for (double v : u.probs()) CHECK(v == doctest::Approx(1.0 / 19));
  CHECK(LabelDistribution::one_hot(4)[4] == 1.0);

  const std::array<double, 3> bad_size{1, 2, 3};
  CHECK_THROWS_AS(LabelDistribution::from_scores(std::span<const double>(bad_size)), InvalidArgumentError);
  std::array<double, kNumLabels> zeros{};
  CHECK_THROWS_AS(dist(zeros), DegenerateDistributionError);
  zeros[2] = -1.0;
  CHECK_THROWS_AS(dist(zeros), InvalidArgumentError);

  std::array<double, kNumLabels> unnormalized{};
  unnormalized[0] = 0.5;
  CHECK_THROWS_AS(LabelDistribution::from_probabilities(unnormalized), ValidationError);
}

TEST_CASE("uniform prior is the identity") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 100; ++t) {
    auto o = random_simplex(rng);
    for (auto& v : o) v = std::max(v, 1e-3);
    const auto obs = dist(o);
    CHECK(linf(bayes_update(LabelDistribution::uniform(), obs), obs) < 1e-12);
  }
}

TEST_CASE("two-class prior against an even two-class observation") {
  const auto prior = dist(floor_filled({{0, 0.8}, {1, 0.2}}));
  const auto obs = dist(floor_filled({{0, 0.5}, {1, 0.5}}));
  const auto post = bayes_update(prior, obs);
  // Hand evaluation: post_i is proportional to prior_i * obs_i. The 17 floor
  // entries contribute ~1e-12 each, far below the tolerance.
  CHECK(post[0] == doctest::Approx(0.8).epsilon(1e-4));
  CHECK(post[1] == doctest::Approx(0.2).epsilon(1e-4));
  for (std::size_t i = 2; i < kNumLabels; ++i) CHECK(post[i] < 1e-4);
}

TEST_CASE("folding three observations in every order matches the direct product") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::array<std::array<double, kNumLabels>, 3> raw{random_simplex(rng, 0.3), random_simplex(rng, 0.3),
                                                      random_simplex(rng, 0.3)};
    const auto prior_raw = random_simplex(rng);
    const auto expected = brute_force_product(raw, prior_raw);
    std::array<int, 3> order{0, 1, 2};
    int perms = 0;
    do {
      auto belief = dist(prior_raw);
      for (int k : order) belief = bayes_update(belief, dist(raw[k]));
      for (std::size_t i = 0; i < kNumLabels; ++i) REQUIRE(std::abs(belief[i] - expected[i]) < 1e-9);
      ++perms;
    } while (std::next_permutation(order.begin(), order.end()));
    CHECK(perms == 6);
  }
}

TEST_CASE("fold order does not matter for long sequences") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> len(1, 100);
  for (int t = 0; t < 100; ++t) {
    std::vector<LabelDistribution> obs;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) obs.push_back(dist(random_simplex(rng, 0.2)));
    auto fold = [&](const std::vector<LabelDistribution>& seq) {
      auto b = LabelDistribution::uniform();
      for (const auto& o : seq) b = bayes_update(b, o);
      return b;
    };
    const auto a = fold(obs);
    std::shuffle(obs.begin(), obs.end(), rng);
    CHECK(linf(a, fold(obs)) < 1e-9);
    CHECK(linf(a, oracle_fuse(obs, LabelDistribution::uniform())) < 1e-9);
  }
}

TEST_CASE("uniform observation returns the prior") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 200; ++t) {
    const auto prior = dist(random_simplex(rng, 0.5));
    CHECK(linf(bayes_update(prior, LabelDistribution::uniform()), prior) < 1e-9);
  }
}

TEST_CASE("a zero observation does not eliminate a class") {
  auto b = bayes_update(LabelDistribution::uniform(), LabelDistribution::one_hot(5));
  check_valid(b);
  CHECK(map_label(b) == 5);
  CHECK(b[2] > 0.0);
  // Later evidence for class 2 can still win.
  std::array<double, kNumLabels> favours_two{};
  favours_two.fill(1.0);
  favours_two[2] = 4.0;
  for (int i = 0; i < 20; ++i) b = bayes_update(b, dist(favours_two));
  CHECK(map_label(b) == 2);
}

TEST_CASE("map_label") {
  CHECK(map_label(LabelDistribution::uniform()) == 0);
  CHECK(map_label(LabelDistribution::one_hot(7)) == 7);
  auto tie = floor_filled({{4, 0.4}, {9, 0.4}});
  CHECK(map_label(dist(tie)) == 4);
}

TEST_CASE("fifty identical observations select their mode") {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 50; ++t) {
    auto o_raw = random_simplex(rng);
    o_raw[3] = 2.0 * *std::max_element(o_raw.begin(), o_raw.end());
    const auto o = dist(o_raw);
    auto prior_raw = random_simplex(rng);
    for (auto& v : prior_raw) v += 1e-3;
    auto b = dist(prior_raw);
    for (int k = 0; k < 50; ++k) b = bayes_update(b, o);
    CHECK(map_label(b) == 3);
  }
}

TEST_CASE("repeated identical observations eventually settle on their mode") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 200; ++t) {
    auto o_raw = random_simplex(rng);
    o_raw[3] = *std::max_element(o_raw.begin(), o_raw.end()) * 1.1;
    const auto o = dist(o_raw);
    REQUIRE(map_label(o) == 3);
    auto prior_raw = random_simplex(rng);
    for (auto& v : prior_raw) v += 1e-3;
    auto b = dist(prior_raw);
    int settled_at = -1;  // first k after which the label never changes again
    for (int k = 1; k <= 200; ++k) {
      b = bayes_update(b, o);
      if (map_label(b) != 3) settled_at = -1;
      else if (settled_at < 0) settled_at = k;
    }
    CHECK(settled_at > 0);
  }
}

TEST_CASE("sum to one and non-negative over many random updates") {
  std::mt19937_64 rng(41);
  auto b = LabelDistribution::uniform();
  for (int i = 0; i < 100000; ++i) {
    if (i % 1000 == 0) b = LabelDistribution::uniform();
    b = bayes_update(b, dist(random_simplex(rng, 0.4)));
    if (i % 97 == 0) check_valid(b);
  }
  check_valid(b);
}

TEST_CASE("clamp_observation raises small entries to the floor") {
  const auto c = clamp_observation(LabelDistribution::one_hot(1));
  const double s = 1.0 + 18 * kObservationFloor;
  CHECK(c[1] == doctest::Approx(1.0 / s));
  CHECK(c[0] == doctest::Approx(kObservationFloor / s));
  check_valid(c);
}
