#include <doctest.h>

#include <cmath>
#include <random>

#include "uidobf/select.hpp"
#include "unit/support.hpp"

using namespace uidobf;

namespace {

AlternateSet make_set(std::vector<double> sims, std::vector<double> uids, double base = 0.0) {
  AlternateSet set;
  set.original = {"a", AuthorLabel::human(), "original"};
  set.original_uid = {base, base, 5};
  for (std::size_t i = 0; i < sims.size(); ++i) {
    set.variants.push_back({"a", AuthorLabel::human(), "v" + std::to_string(i)});
    set.similarity.push_back(sims[i]);
    set.uid.push_back({uids[i], uids[i], 5});
  }
  return set;
}

}  // namespace

TEST_CASE("fallback when nothing passes") {
  const auto set = make_set({0.5, 0.9}, {3, 4});
  const auto r = select_candidate(set, UidMetric::variance, 0.98);
  CHECK(r.fallback);
  CHECK_FALSE(r.chosen_variant_index);
  CHECK(r.chosen_similarity == 1.0);
  CHECK(selected_text(set, r) == "original");
}

TEST_CASE("largest delta among passing variants wins") {
  const auto set = make_set({0.99, 0.97, 0.985, 0.99}, {1.0, 9.0, -3.0, 2.0}, 0.5);
  const auto r = select_candidate(set, UidMetric::variance, 0.98);
  REQUIRE(r.chosen_variant_index);
  CHECK(*r.chosen_variant_index == 2);  // |-3 - 0.5| beats 0.5 and 1.5; variant 1 is below threshold
  CHECK(r.chosen_uid_delta == 3.5);
  CHECK(r.chosen_similarity == 0.985);
  CHECK_FALSE(r.fallback);
  CHECK(selected_text(set, r) == "v2");
}

TEST_CASE("ties go to the lower index") {
  const auto set = make_set({0.99, 0.99, 0.99}, {1.0, 3.0, -1.0}, 1.0);
  CHECK(*select_candidate(set, UidMetric::variance, 0.98).chosen_variant_index == 1);
  const auto tie = make_set({0.99, 0.99}, {2.0, 0.0}, 1.0);
  CHECK(*select_candidate(tie, UidMetric::variance, 0.98).chosen_variant_index == 0);
}

TEST_CASE("threshold equality passes") {
  const auto set = make_set({0.85}, {1.0});
  CHECK_FALSE(select_candidate(set, UidMetric::variance, 0.85).fallback);
  CHECK(Thresholds{}.for_method(Method::uws) == 0.98);
  CHECK(Thresholds{}.for_method(Method::up) == 0.85);
}

TEST_CASE("both metrics") {
  SUBCASE("identical scores give identical results") {
    const auto set = make_set({0.99, 0.99}, {1.0, 2.0});
    const auto [var, d2] = select_both_metrics(set, 0.98);
    CHECK(var.chosen_variant_index == d2.chosen_variant_index);
    CHECK(var.metric == UidMetric::variance);
    CHECK(d2.metric == UidMetric::diff_squared);
  }
  SUBCASE("only variant 3 passes") {
    auto set = make_set({0.5, 0.6, 0.7, 0.99, 0.4}, {9, 9, 9, 1, 9});
    set.uid[0].diff_squared = 50;
    const auto [var, d2] = select_both_metrics(set, 0.98);
    CHECK(*var.chosen_variant_index == 3);
    CHECK(*d2.chosen_variant_index == 3);
  }
  SUBCASE("metrics can disagree") {
    auto set = make_set({0.99, 0.99}, {0, 0});
    set.uid[0] = {5.0, 0.1, 5};
    set.uid[1] = {0.1, 5.0, 5};
    const auto [var, d2] = select_both_metrics(set, 0.98);
    CHECK(*var.chosen_variant_index == 0);
    CHECK(*d2.chosen_variant_index == 1);
    CHECK(selected_text(set, var) != selected_text(set, d2));
  }
}

TEST_CASE("selection properties on random sets") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const auto set = testing::random_alternate_set(rng, 10);
    for (const auto metric : {UidMetric::variance, UidMetric::diff_squared}) {
      const double threshold = 0.9 + 0.01 * static_cast<double>(rng() % 11);
      const auto r = select_candidate(set, metric, threshold);
      CHECK(r.chosen_variant_index == testing::oracle_select(set, metric, threshold));
      CHECK(r.fallback == !r.chosen_variant_index.has_value());
      CHECK(r.chosen_uid_delta >= 0.0);
      if (!r.fallback) CHECK(r.chosen_similarity >= threshold);

      // Argmax dominance.
      const double base = metric_value(set.original_uid, metric);
      for (std::size_t i = 0; i < set.k(); ++i) {
        if (set.similarity[i] >= threshold) {
          CHECK(std::abs(metric_value(set.uid[i], metric) - base) <= r.chosen_uid_delta);
        }
      }
      // Raising the threshold never increases the chosen delta.
      const auto stricter = select_candidate(set, metric, std::min(1.0, threshold + 0.02));
      CHECK(stricter.chosen_uid_delta <= r.chosen_uid_delta);
    }
  }
}
