#include <set>

#include "coil/datagen.hpp"
#include "coil/errors.hpp"
#include "coil/evaluator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace coil;

namespace {

void check_rows_valid_and_distinct(const Dataset& d, int rt) {
  std::set<std::vector<double>> seen;
  for (const auto& row : d.rows) {
    const auto s = correct_schedule(denormalize_row(row));
    CHECK(oracle::violating(oracle::timeline(s), rt) == 0);
    CHECK(seen.insert(row).second);
    for (double v : row) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

}  // namespace

TEST_CASE("datagen_fitness examples") {
  const std::vector<double> zeros(60, 0.0);
  CHECK(datagen_fitness(zeros, 10) == 106.0);

  // Two robots can never exceed rt=2, so only the bonus term remains.
  const std::vector<double> hundred{0, 50, 10, 50};
  CHECK(datagen_fitness(hundred, 2) == 1.0);
  const std::vector<double> fifty{0, 25, 40, 25};
  const std::vector<double> two_hundred{0, 50, 5, 50, 10, 50, 15, 50};
  CHECK(datagen_fitness(fifty, 4) == 2.0);
  CHECK(datagen_fitness(two_hundred, 4) == 0.5);
}

TEST_CASE("normalization round-trip") {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto s = correct_schedule(oracle::random_schedule(30, rng));
    CHECK(denormalize_row(normalize_schedule(s)) == s);
  }
  const std::vector<double> odd{0.5};
  CHECK_THROWS_AS(denormalize_row(odd), ShapeError);
}

TEST_CASE("unconstrained mining fills the dataset in one restart") {
  ProblemConfig c;
  c.rt = 30;
  Rng rng(2);
  const auto d = generate_dataset(c, 50, DatagenConfig{}, rng);
  CHECK(d.size() == 50);
  CHECK(d.dim() == 60);
  CHECK(d.meta.restarts == 1);
  check_rows_valid_and_distinct(d, 30);
}

TEST_CASE("mined rows at rt=10 are valid and distinct") {
  ProblemConfig c;
  Rng rng(3);
  const auto d = generate_dataset(c, 60, DatagenConfig{}, rng);
  CHECK(d.size() == 60);
  CHECK(d.meta.rb == 30);
  CHECK(d.meta.rt == 10);
  CHECK(d.meta.restarts >= 1);
  CHECK(d.meta.evaluations > 0);
  check_rows_valid_and_distinct(d, 10);
}

TEST_CASE("mining is independent of the thread count") {
  ProblemConfig c;
  c.rt = 12;
  DatagenConfig one;
  DatagenConfig three;
  three.threads = 3;
  Rng a(4), b(4);
  const auto d1 = generate_dataset(c, 40, one, a);
  const auto d3 = generate_dataset(c, 40, three, b);
  CHECK(d1.rows == d3.rows);
  CHECK(d1.meta.restarts == d3.meta.restarts);
  CHECK(d1.meta.evaluations == d3.meta.evaluations);
}

TEST_CASE("restart budget exhaustion carries the partial dataset") {
  ProblemConfig c;
  DatagenConfig tight;
  tight.max_restarts = 1;
  tight.generations = 1;
  tight.population_size = 10;
  Rng rng(5);
  try {
    generate_dataset(c, 100000, tight, rng);
    FAIL("expected PartialDatasetError");
  } catch (const PartialDatasetError& e) {
    CHECK(e.partial().size() < 100000);
    CHECK(e.partial().meta.restarts == 1);
    check_rows_valid_and_distinct(e.partial(), 10);
  }
}

TEST_CASE("invalid requests") {
  ProblemConfig c;
  Rng rng(6);
  CHECK_THROWS_AS(generate_dataset(c, 0, DatagenConfig{}, rng), InvalidConfigError);
  DatagenConfig bad;
  bad.threads = 0;
  CHECK_THROWS_AS(generate_dataset(c, 1, bad, rng), InvalidConfigError);
}
