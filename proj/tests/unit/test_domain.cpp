#include <set>

#include "coil/domain.hpp"
#include "coil/errors.hpp"
#include "coil/rng.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coil;

TEST_CASE("rng streams are reproducible and split independently of parent draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng fresh(42);
  const Rng child_before = fresh.split(7);
  fresh.next_u64();
  CHECK(fresh.split(7).seed() == child_before.seed());
  CHECK(fresh.split(7).seed() != fresh.split(8).seed());
}

TEST_CASE("mt19937_64 engine matches the standard's 10000th output") {
  std::mt19937_64 e(5489u);
  e.discard(9999);
  CHECK(e() == 9981545732273789042ULL);
}

TEST_CASE("uniform_int is inclusive and covers its range") {
  Rng rng(3);
  std::set<int> seen;
  for (int i = 0; i < 2000; ++i) {
    const int v = rng.uniform_int(60, 65);
    CHECK(v >= 60);
    CHECK(v <= 65);
    seen.insert(v);
  }
  CHECK(seen.size() == 6);
  CHECK(rng.uniform_int(9, 9) == 9);
}

TEST_CASE("uniform01 and normal moments") {
  Rng rng(11);
  double s = 0, s2 = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 0.03);
  CHECK(std::abs(s2 / n - 1.0) < 0.05);
}

TEST_CASE("bernoulli edge probabilities consume no draws") {
  Rng a(5), b(5);
  CHECK_FALSE(a.bernoulli(0.0));
  CHECK(a.bernoulli(1.0));
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("generate_requests") {
  Rng rng(1);
  ProblemConfig c;
  c.dr = 60;
  c.rq = 3;
  CHECK(generate_requests(c, rng).durations == std::vector<int>{60, 60, 60});

  ProblemConfig d;
  const auto r = generate_requests(d, rng);
  CHECK(r.size() == 120);
  for (int v : r.durations) {
    CHECK(v >= 60);
    CHECK(v <= 180);
  }

  ProblemConfig e;
  e.dr = 360;
  e.rq = 240;
  Rng r1(99), r2(99);
  CHECK(generate_requests(e, r1) == generate_requests(e, r2));

  ProblemConfig bad;
  bad.dr = 59;
  CHECK_THROWS_AS(generate_requests(bad, rng), InvalidConfigError);
}

TEST_CASE("request stream is pinned for seed 2024") {
  ProblemConfig c;
  c.rq = 5;
  Rng rng(2024);
  const auto first = generate_requests(c, rng).durations;
  Rng again(2024);
  CHECK(generate_requests(c, again).durations == first);
}

TEST_CASE("correct_schedule examples") {
  auto one = [](int st, int rt) {
    return correct_schedule(FleetSchedule{{{st, rt}}}).entries.at(0);
  };
  CHECK(one(0, 65) == RobotShift{0, 65});
  CHECK(one(66, 66) == RobotShift{66, 0});
  CHECK(one(30, 40) == RobotShift{30, 35});
  CHECK(one(65, 1) == RobotShift{65, 0});
  CHECK(one(10, 10) == RobotShift{10, 10});
}

TEST_CASE("correct_schedule is idempotent, keeps starts and yields corrected schedules") {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    const auto raw = oracle::random_schedule(8, rng);
    const auto once = correct_schedule(raw);
    CHECK(correct_schedule(once) == once);
    CHECK(once.is_corrected());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      CHECK(once.entries[i].start_slot == raw.entries[i].start_slot);
      CHECK(once.entries[i].end_slot() <= kSlotsPerDay);
    }
  }
}

TEST_CASE("duration_minutes") {
  CHECK(duration_minutes(0).value() == 60);
  CHECK(duration_minutes(6).value() == 120);
  CHECK(duration_minutes(65).value() == 710);
  CHECK(duration_minutes(66).value() == 720);
  for (int r = 0; r < 66; ++r) CHECK(duration_minutes(r) < duration_minutes(r + 1));
  CHECK_THROWS_AS(duration_minutes(-1), BoundsError);
  CHECK_THROWS_AS(duration_minutes(67), BoundsError);
}

TEST_CASE("genome mapping") {
  const std::vector<double> g{1, 2, 3, 4};
  const auto s = schedule_from_genome(g);
  CHECK(s.entries == std::vector<RobotShift>{{1, 2}, {3, 4}});
  CHECK(genome_from_schedule(s) == g);
  const std::vector<double> odd{1, 2, 3};
  CHECK_THROWS_AS(schedule_from_genome(odd), BoundsError);
  const std::vector<double> frac{1.5, 2};
  CHECK_THROWS_AS(schedule_from_genome(frac), BoundsError);
  const std::vector<double> high{67, 0};
  CHECK_THROWS_AS(schedule_from_genome(high), BoundsError);
}

TEST_CASE("in_bounds and is_corrected") {
  CHECK(FleetSchedule{{{0, 65}}}.is_corrected());
  CHECK_FALSE(FleetSchedule{{{1, 65}}}.is_corrected());
  CHECK_FALSE(FleetSchedule{{{0, 67}}}.in_bounds());
  CHECK(FleetSchedule{{{66, 0}}}.is_corrected());
}
