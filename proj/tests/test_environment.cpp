#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lmdp/environment.hpp"
#include "lmdp/errors.hpp"
#include "lmdp/evaluation.hpp"
#include "lmdp/instances.hpp"
#include "oracles.hpp"

using namespace lmdp;

TEST_SUITE("environment") {
  TEST_CASE("deterministic model gives the same trajectory for every seed") {
    const auto m = fixture::chain(4, 2, 3, {0.1, 0.2, 0.3, 0.0});
    const StationaryPolicy pi{{1, 0, 1, 0}};
    Rng first(1);
    const auto ref = rollout(m, pi, first);
    for (std::uint64_t seed = 2; seed < 20; ++seed) {
      Rng rng(seed);
      const auto t = rollout(m, pi, rng);
      REQUIRE(t.steps.size() == ref.steps.size());
      for (std::size_t i = 0; i < t.steps.size(); ++i) {
        CHECK(t.steps[i].state == ref.steps[i].state);
        CHECK(t.steps[i].reward == ref.steps[i].reward);
      }
      CHECK(t.final_state == ref.final_state);
    }
    CHECK(ref.total_reward() == doctest::Approx(0.6));
  }

  TEST_CASE("degenerate weights always reveal the same context") {
    const auto base = random_lmdp(2, 3, 2, 3, 2, 2);
    LmdpModel m(2, 3, 2, 3, {1.0, 0.0}, base.init_data(), base.transitions_data(), base.rewards_data());
    Rng rng(4);
    for (int k = 0; k < 1000; ++k) CHECK(rollout(m, StationaryPolicy{{0, 0, 0}}, rng).context == 0);
  }

  TEST_CASE("trajectories follow the model") {
    const auto m = random_lmdp(3, 4, 2, 5, 2, 6);
    Rng rng(8);
    for (int k = 0; k < 500; ++k) {
      const auto t = rollout(m, StationaryPolicy{{0, 1, 0, 1}}, rng);
      CHECK(m.init(t.context, t.steps.front().state) > 0.0);
      for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const int next = i + 1 < t.steps.size() ? t.steps[i + 1].state : t.final_state;
        CHECK(m.transition(t.context, t.steps[i].state, t.steps[i].action, next) > 0.0);
        CHECK(t.steps[i].reward == m.reward(t.context, t.steps[i].state, t.steps[i].action));
      }
    }
  }

  TEST_CASE("mean return and context frequencies match the model") {
    const auto m = random_lmdp(3, 3, 2, 4, 3, 10);
    const StationaryPolicy pi{{1, 0, 1}};
    Rng rng(12);
    const int n = 100000;
    std::vector<double> xs;
    std::vector<int> ctx(3, 0);
    for (int k = 0; k < n; ++k) {
      const auto t = rollout(m, pi, rng);
      xs.push_back(t.total_reward());
      ++ctx[static_cast<std::size_t>(t.context)];
    }
    const auto est = oracle::moments(xs);
    CHECK(std::abs(est.mean - value_of_policy(m, pi)) <= 3.0 * est.mean_se);
    for (int c = 0; c < 3; ++c) {
      const double w = m.weight(c);
      const double freq = static_cast<double>(ctx[static_cast<std::size_t>(c)]) / n;
      CHECK(std::abs(freq - w) <= 3.0 * std::sqrt(w * (1 - w) / n));
    }
  }

  TEST_CASE("replaying a seed reproduces the trajectories") {
    const auto m = random_lmdp(2, 4, 2, 4, 3, 13);
    Rng a(99), b(99);
    for (int k = 0; k < 200; ++k) {
      const auto x = rollout(m, StationaryPolicy{{1, 1, 0, 0}}, a);
      const auto y = rollout(m, StationaryPolicy{{1, 1, 0, 0}}, b);
      CHECK(x.context == y.context);
      CHECK(x.final_state == y.final_state);
      for (std::size_t i = 0; i < x.steps.size(); ++i) CHECK(x.steps[i].state == y.steps[i].state);
    }
  }

  TEST_CASE("tree policies off their tree are rejected") {
    const auto m = random_lmdp(2, 3, 2, 3, 2, 14);
    auto shifted = random_lmdp(2, 3, 2, 3, 3, 15);
    const auto tree = std::make_shared<const HistoryTree>(build_history_tree(m));
    const TreePolicy pi{tree, std::vector<int>(static_cast<std::size_t>(tree->size()), 0)};
    Rng rng(1);
    bool thrown = false;
    for (int k = 0; k < 200 && !thrown; ++k) {
      try {
        rollout(shifted, pi, rng);
      } catch (const PolicyDomainError&) {
        thrown = true;
      }
    }
    CHECK(thrown);
  }

  TEST_CASE("derived seeds differ per index") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  }
}
