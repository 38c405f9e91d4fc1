#include "coil/errors.hpp"
#include "coil/latent.hpp"
#include "doctest.h"

using namespace coil;

TEST_CASE("express on a zero model emits the midpoint schedule") {
  const auto model = zero_model(VaeArchitecture{4, 3, 2});
  const std::vector<double> z{0.0, 1.0};
  const auto s = express(z, model);
  CHECK(s.entries == std::vector<RobotShift>{{33, 32}, {33, 32}});
}

TEST_CASE("express saturates to the slot bounds and corrects") {
  auto model = zero_model(VaeArchitecture{4, 3, 2});
  model.dec_out.bias << 40.0, 40.0, -40.0, 40.0;
  const std::vector<double> z{-2.0, 2.0};
  const auto s = express(z, model);
  CHECK(s.entries == std::vector<RobotShift>{{66, 0}, {0, 65}});
}

TEST_CASE("express is total, corrected and deterministic on random models") {
  Rng rng(1);
  const VaeArchitecture arch{60, 16, 10};
  for (int t = 0; t < 20; ++t) {
    const auto model = init_model(arch, rng);
    std::vector<double> z(10);
    for (double& v : z) v = rng.uniform(-2.0, 2.0);
    const auto s = express(z, model);
    CHECK(s.size() == 30);
    CHECK(s.is_corrected());
    CHECK(express(z, model) == s);
  }
}

TEST_CASE("express argument checks") {
  const auto model = zero_model(VaeArchitecture{4, 3, 2});
  const std::vector<double> wrong{0.0};
  CHECK_THROWS_AS(express(wrong, model), ShapeError);
  const std::vector<double> outside{0.0, 2.5};
  CHECK_THROWS_AS(express(outside, model), BoundsError);
}

TEST_CASE("run_coil requires a model sized for the fleet") {
  ProblemConfig config;
  Rng rng(2);
  const auto req = generate_requests(config, rng);
  const auto small = init_model(VaeArchitecture{20, 8, 4}, rng);
  CHECK_THROWS_AS(run_coil(req, config, small, GaConfig{}, rng), PreconditionError);
}

TEST_CASE("run_coil searches real genomes of latent width") {
  ProblemConfig config;
  config.rt = config.rb;
  Rng rng(3);
  const auto req = generate_requests(config, rng);
  const auto model = init_model(VaeArchitecture{60, 16, 8}, rng);
  GaConfig ga;
  ga.generations = 5;
  const auto r = run_coil(req, config, model, ga, rng);
  CHECK(r.best_genome.size() == 8);
  for (double g : r.best_genome) {
    CHECK(g >= kLatentMin);
    CHECK(g <= kLatentMax);
  }
  CHECK(r.schedule == express(r.best_genome, model));
  CHECK(r.reported.constraint.violating_slots == 0);
  CHECK(r.trace.size() == 6);
}
