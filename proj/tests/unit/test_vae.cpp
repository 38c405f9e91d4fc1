#include <cmath>
#include <limits>

#include "coil/errors.hpp"
#include "coil/vae.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace coil;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using namespace fixture;

TEST_CASE("loss matches a scalar-loop forward pass") {
  Rng rng(1);
  const VaeArchitecture arch{6, 7, 3};
  const auto model = init_model(arch, rng);
  const auto x = uniform_matrix(6, 5, rng);
  const auto eps = normal_matrix(3, 5, rng);
  const auto f = forward_loops(model, x, eps);
  for (auto red : {KldReduction::kSum, KldReduction::kMeanOverLatent}) {
    const LossConfig cfg{0.7, red};
    const auto t = loss_with_noise(model, x, eps, cfg);
    CHECK(t.reconstruction == doctest::Approx(f.recon).epsilon(1e-12));
    CHECK(t.kld == doctest::Approx(f.kld).epsilon(1e-12));
    const double w = red == KldReduction::kSum ? 0.7 : 0.7 / 3;
    CHECK(t.total == doctest::Approx(f.recon + w * f.kld).epsilon(1e-12));
  }
}

TEST_CASE("analytic gradients match central differences on the tiny architecture") {
  const VaeArchitecture arch{4, 5, 2};
  Rng rng(20240611);
  auto model = init_model(arch, rng);
  const auto x = uniform_matrix(4, 3, rng);
  const auto eps = normal_matrix(2, 3, rng);
  // Every ReLU pre-activation sits far from its kink relative to the step.
  CHECK(forward_loops(model, x, eps).min_relu_margin > 1e-3);

  for (auto red : {KldReduction::kSum, KldReduction::kMeanOverLatent}) {
    const LossConfig cfg{1.0, red};
    const double worst = worst_gradient_error(model, x, eps, cfg);
    CAPTURE(to_string(red));
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("KLD and reconstruction unit values") {
  const VaeArchitecture arch{2, 1, 1};
  auto model = zero_model(arch);
  MatrixXd x = MatrixXd::Constant(2, 1, 0.5);
  const MatrixXd eps = MatrixXd::Zero(1, 1);
  const auto prior = loss_with_noise(model, x, eps);
  CHECK(std::abs(prior.kld - 0.0) <= 1e-12);
  CHECK(std::abs(prior.reconstruction - 0.0) <= 1e-12);
  model.enc_head.bias(0) = 1.0;
  const auto shifted = loss_with_noise(model, x, eps);
  CHECK(std::abs(shifted.kld - 0.5) <= 1e-12);
}

TEST_CASE("loss terms are never negative") {
  Rng rng(3);
  const VaeArchitecture arch{5, 6, 3};
  for (int t = 0; t < 50; ++t) {
    const auto model = init_model(arch, rng);
    const auto x = uniform_matrix(5, 4, rng);
    const auto terms = loss(model, x, rng);
    CHECK(terms.kld >= 0.0);
    CHECK(terms.reconstruction >= 0.0);
  }
}

TEST_CASE("encode and decode") {
  const VaeArchitecture arch{3, 4, 2};
  auto model = zero_model(arch);
  model.enc_head.bias << 0.25, -0.5, 1.5, 2.0;
  model.dec_out.bias << 0.0, 1.0, -1.0;
  const std::vector<double> x{0.1, 0.2, 0.3};
  const auto post = encode(model, x);
  CHECK(post.mu(0) == 0.25);
  CHECK(post.mu(1) == -0.5);
  CHECK(post.logvar(0) == 1.5);
  CHECK(post.logvar(1) == 2.0);
  const std::vector<double> z{0.3, -0.7};
  const auto out = decode(model, z);
  CHECK(out(0) == 0.5);
  CHECK(out(1) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))));
  CHECK(out(2) == doctest::Approx(1.0 / (1.0 + std::exp(1.0))));

  Rng rng(4);
  const auto trained = init_model(arch, rng);
  CHECK(encode(trained, x).mu == encode(trained, x).mu);
  CHECK(decode(trained, z) == decode(trained, z));
  const std::vector<double> bad{0.1, std::nan(""), 0.3};
  CHECK_THROWS_AS(encode(trained, bad), BoundsError);
  const std::vector<double> short_x{0.1};
  CHECK_THROWS_AS(encode(trained, short_x), ShapeError);
  CHECK_THROWS_AS(decode(trained, short_x), ShapeError);
}

TEST_CASE("reparameterize") {
  Rng rng(5);
  VectorXd mu(3);
  mu << 0.5, -1.0, 2.0;
  const VectorXd tight = VectorXd::Constant(3, -50.0);
  const auto z = reparameterize(mu, tight, rng);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(z(i) - mu(i)) < 1e-10);

  const VectorXd zero = VectorXd::Zero(4);
  VectorXd sum = VectorXd::Zero(4), sq = VectorXd::Zero(4);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto s = reparameterize(zero, zero, rng);
    sum += s;
    sq += s.cwiseProduct(s);
  }
  for (int d = 0; d < 4; ++d) {
    const double mean = sum(d) / n;
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(sq(d) / n - mean * mean - 1.0) < 0.05);
  }
  Rng a(6), b(6);
  CHECK(reparameterize(mu, zero.head(3), a) == reparameterize(mu, zero.head(3), b));
  CHECK_THROWS_AS(reparameterize(mu, zero, a), ShapeError);
}

TEST_CASE("training memorizes a single repeated row") {
  std::vector<std::vector<double>> rows(64, {0.2, 0.8, 0.5, 0.35, 0.65, 0.1});
  TrainConfig cfg;
  cfg.epochs = 300;
  cfg.restarts = 1;
  cfg.batch_size = 8;
  Rng rng(7);
  const auto model = train(rows, VaeArchitecture{6, 16, 2}, cfg, rng);
  Rng noise(8);
  const auto terms = loss(model, rows_to_matrix(rows), noise);
  CHECK(terms.reconstruction < 1e-3);
}

TEST_CASE("training reduces loss, is deterministic and independent of threads") {
  Rng data_rng(9);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 120; ++i) {
    std::vector<double> r(8);
    const double base = data_rng.uniform01();
    for (int d = 0; d < 8; ++d) r[d] = std::clamp(base + 0.1 * data_rng.normal(), 0.0, 1.0);
    rows.push_back(r);
  }
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.restarts = 3;
  const VaeArchitecture arch{8, 12, 3};
  Rng a(10), b(10);
  TrainConfig threaded = cfg;
  threaded.threads = 2;
  TrainReport ra, rb;
  const auto m1 = train(rows, arch, cfg, a, &ra);
  const auto m2 = train(rows, arch, threaded, b, &rb);
  CHECK(m1.enc_hidden.weight == m2.enc_hidden.weight);
  CHECK(m1.dec_out.bias == m2.dec_out.bias);
  CHECK(m1.meta.final_loss == m2.meta.final_loss);
  CHECK(ra.selected == rb.selected);
  REQUIRE(ra.restarts.size() == 3);
  for (const auto& r : ra.restarts) {
    CHECK_FALSE(r.diverged);
    CHECK(r.final_loss < r.initial_loss);
    CHECK(r.final_loss >= m1.meta.final_loss);
  }
  CHECK(m1.meta.restart_index == ra.selected);
  CHECK(m1.meta.epochs == 40);
}

TEST_CASE("non-finite data diverges every restart") {
  std::vector<std::vector<double>> rows(10, {0.5, std::nan("")});
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.restarts = 2;
  Rng rng(11);
  CHECK_THROWS_AS(train(rows, VaeArchitecture{2, 3, 1}, cfg, rng), DivergenceError);
}

TEST_CASE("configuration errors") {
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidConfigError);
  TrainConfig r;
  r.restarts = 0;
  CHECK_THROWS_AS(r.validate(), InvalidConfigError);
  Rng rng(12);
  CHECK_THROWS_AS(train({{0.1, 0.2}}, VaeArchitecture{3, 2, 1}, TrainConfig{}, rng), ShapeError);
  CHECK(kld_reduction_from_string(to_string(KldReduction::kSum)) == KldReduction::kSum);
  CHECK_THROWS_AS(kld_reduction_from_string("mean"), InvalidConfigError);
}
