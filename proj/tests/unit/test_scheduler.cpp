#include <numeric>

#include "coil/errors.hpp"
#include "coil/scheduler.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace coil;
using namespace fixture;

TEST_CASE("allocate matches hand-traced fixtures") {
  for (const auto& f : kFixtures) {
    CAPTURE(f.name);
    const auto r = allocate(RequestSet{f.requests}, fleet(f.run_slots));
    CHECK(r.assignment == f.assignment);
    CHECK(r.remaining_minutes == f.remaining);
    const int met = static_cast<int>(
        std::count_if(f.assignment.begin(), f.assignment.end(), [](int a) { return a != kUnmet; }));
    CHECK(r.total_requests_met == met);
  }
}

TEST_CASE("allocate agrees with an independent FCFS scan on small random instances") {
  Rng rng(77);
  for (int trial = 0; trial < 3000; ++trial) {
    const int rb = rng.uniform_int(1, 4);
    const int rq = rng.uniform_int(1, 6);
    FleetSchedule s;
    std::vector<int> caps;
    for (int i = 0; i < rb; ++i) {
      const int run = rng.uniform_int(0, 20);
      s.entries.push_back({rng.uniform_int(0, 65 - run), run});
      caps.push_back(60 + 10 * run);
    }
    RequestSet req;
    for (int j = 0; j < rq; ++j) req.durations.push_back(rng.uniform_int(60, 180));
    CHECK(allocate(req, s) == oracle::fcfs(req.durations, caps));
  }
}

TEST_CASE("conservation and monotonicity") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = correct_schedule(oracle::random_schedule(6, rng));
    RequestSet req;
    for (int j = 0; j < 12; ++j) req.durations.push_back(rng.uniform_int(60, 180));
    const auto r = allocate(req, s);
    int assigned = 0;
    for (std::size_t j = 0; j < req.size(); ++j)
      if (r.assignment[j] != kUnmet) assigned += req.durations[j];
    int total = 0;
    for (const auto& e : s.entries) total += duration_minutes(e.run_slots).value();
    const int left = std::accumulate(r.remaining_minutes.begin(), r.remaining_minutes.end(), 0);
    CHECK(assigned + left == total);
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(r.remaining_minutes[i] >= 0);
      CHECK(r.remaining_minutes[i] <= duration_minutes(s.entries[i].run_slots).value());
    }
    RequestSet more = req;
    more.durations.push_back(rng.uniform_int(60, 180));
    CHECK(allocate(more, s).total_requests_met >= r.total_requests_met);
    CHECK(allocate(req, s) == r);
  }
}

TEST_CASE("allocate rejects uncorrected schedules") {
  CHECK_THROWS_AS(allocate(RequestSet{{60}}, FleetSchedule{{{30, 40}}}), PreconditionError);
}

TEST_CASE("update_durations examples") {
  auto shrink = [](int run, int remaining) {
    AllocationResult r;
    r.remaining_minutes = {remaining};
    return update_durations(FleetSchedule{{{3, run}}}, r).entries.at(0);
  };
  CHECK(shrink(12, 0) == RobotShift{3, 12});
  CHECK(shrink(12, 65) == RobotShift{3, 6});
  CHECK(shrink(0, 60) == RobotShift{3, 0});
  AllocationResult wrong;
  wrong.remaining_minutes = {0, 0};
  CHECK_THROWS_AS(update_durations(FleetSchedule{{{0, 0}}}, wrong), PreconditionError);
}

TEST_CASE("utilization") {
  const FleetSchedule s{{{0, 0}, {0, 6}}};
  const auto r = allocate(RequestSet{{60, 120}}, s);
  CHECK(utilization(s, r) == doctest::Approx(1.0));
  const auto half = allocate(RequestSet{{90}}, s);
  CHECK(utilization(s, half) == doctest::Approx(90.0 / 180.0));
  CHECK(utilization(FleetSchedule{}, AllocationResult{}) == 0.0);
}
