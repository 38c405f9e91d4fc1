#include <numeric>

#include "coil/errors.hpp"
#include "coil/evaluator.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coil;

using namespace fixture;

TEST_CASE("two-hour example timeline and score") {
  const auto t = build_timeline(kTwoHourExample);
  for (int s = 0; s < 12; ++s) CHECK(t.counts[s] == kTwoHourSums[s]);
  for (int s = 12; s < kSlotsPerDay; ++s) CHECK(t.counts[s] == 0);
  CHECK(t.peak() == 4);
  const auto c = score_constraint(t, 2);
  CHECK(c.violating_slots == 4);
  CHECK(c.peak_excess == 2);
  CHECK_FALSE(c.valid());
}

TEST_CASE("timeline basics") {
  CHECK(build_timeline(FleetSchedule{}).counts == OccupancyTimeline{}.counts);
  const auto one = build_timeline(FleetSchedule{{{0, 0}}});
  for (int s = 0; s < kSlotsPerDay; ++s) CHECK(one.counts[s] == (s < 6 ? 1 : 0));
  const auto last = build_timeline(FleetSchedule{{{66, 0}}});
  for (int s = 0; s < kSlotsPerDay; ++s) CHECK(last.counts[s] == (s >= 66 ? 1 : 0));
  CHECK_THROWS_AS(build_timeline(FleetSchedule{{{30, 40}}}), PreconditionError);
}

TEST_CASE("score_constraint examples") {
  CHECK(score_constraint(OccupancyTimeline{}, 10) == ConstraintScore{0, 0});
  OccupancyTimeline full;
  full.counts.fill(11);
  CHECK(score_constraint(full, 10) == ConstraintScore{72, 1});
}

TEST_CASE("timeline agrees with a membership scan and scoring is antitone in rt") {
  Rng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const int rb = rng.uniform_int(0, 30);
    const auto s = correct_schedule(oracle::random_schedule(rb, rng));
    const auto t = build_timeline(s);
    const auto scan = oracle::timeline(s);
    CHECK(t.counts == scan);
    int total = 0;
    for (const auto& e : s.entries) total += 6 + e.run_slots;
    CHECK(std::accumulate(t.counts.begin(), t.counts.end(), 0) == total);
    ConstraintScore prev{kSlotsPerDay + 1, rb + 1};
    for (int rt = 1; rt <= 31; ++rt) {
      const auto c = score_constraint(t, rt);
      CHECK(c.violating_slots == oracle::violating(scan, rt));
      CHECK(c.violating_slots <= prev.violating_slots);
      CHECK(c.peak_excess <= prev.peak_excess);
      CHECK((c.violating_slots == 0) == (c.peak_excess == 0));
      prev = c;
    }
  }
}

TEST_CASE("post-schedule never exceeds worst case") {
  Rng rng(4);
  ProblemConfig config;
  for (int trial = 0; trial < 200; ++trial) {
    const auto req = generate_requests(config, rng);
    const auto raw = oracle::random_schedule(config.rb, rng);
    const auto worst = evaluate(req, raw, config, EvalMode::kWorstCase);
    const auto post = evaluate(req, raw, config, EvalMode::kPostSchedule);
    CHECK(post.constraint.violating_slots <= worst.constraint.violating_slots);
    CHECK(post.constraint.peak_excess <= worst.constraint.peak_excess);
    CHECK(post.objective == worst.objective);
    CHECK(post.objective == allocate(req, correct_schedule(raw)).total_requests_met);
    CHECK(worst.mode == EvalMode::kWorstCase);
    CHECK(post.mode == EvalMode::kPostSchedule);
  }
}

TEST_CASE("unused tail removes a worst-case overlap") {
  // Robot 0 covers slots [0, 12), robot 1 covers [6, 12). The only request
  // fits robot 1 exactly, so robot 0 shrinks back to [0, 6).
  ProblemConfig config;
  config.rb = 2;
  config.rt = 1;
  const FleetSchedule raw{{{0, 6}, {6, 0}}};
  const RequestSet req{{60}};
  const auto worst = evaluate(req, raw, config, EvalMode::kWorstCase);
  const auto post = evaluate(req, raw, config, EvalMode::kPostSchedule);
  CHECK(worst.constraint.violating_slots == 6);
  CHECK(post.constraint.violating_slots == 0);
  CHECK(post.constraint.violating_slots < worst.constraint.violating_slots);
}

TEST_CASE("mode and measure names round-trip") {
  for (auto m : {EvalMode::kWorstCase, EvalMode::kPostSchedule})
    CHECK(eval_mode_from_string(to_string(m)) == m);
  for (auto m : {ConstraintMeasure::kViolatingSlots, ConstraintMeasure::kPeakExcess})
    CHECK(constraint_measure_from_string(to_string(m)) == m);
}
