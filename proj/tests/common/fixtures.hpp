#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "coil/evaluator.hpp"
#include "coil/scheduler.hpp"
#include "coil/vae.hpp"

namespace fixture {

using namespace coil;
using Eigen::MatrixXd;

// Four robots over a two-hour window, ignoring the one-hour minimum.
inline const std::vector<SlotInterval> kTwoHourExample = {{3, 7}, {4, 12}, {0, 5}, {0, 12}};
inline const std::vector<int> kTwoHourSums = {2, 2, 2, 3, 4, 3, 3, 2, 2, 2, 2, 2};

struct Fixture {
  const char* name;
  std::vector<int> run_slots;
  std::vector<int> requests;
  std::vector<int> assignment;
  std::vector<int> remaining;
};

inline FleetSchedule fleet(const std::vector<int>& runs) {
  FleetSchedule s;
  for (int r : runs) s.entries.push_back({0, r});
  return s;
}

// Capacities are 60 + 10 * run slots.
inline const std::vector<Fixture> kFixtures = {
    {"exact fit on a one-hour shift", {0}, {60}, {0}, {0}},
    {"request longer than any robot", {0}, {70}, {kUnmet}, {60}},
    {"closest fit then most-remaining", {1, 7}, {65, 65}, {0, 1}, {5, 65}},
    {"closest-fit tie goes to lowest index", {0, 0}, {60}, {0}, {0, 60}},
    {"most-remaining tie goes to lowest index", {6, 6}, {60}, {0}, {60, 120}},
    {"closest fit beats a roomier robot", {14, 4}, {100}, {1}, {200, 0}},
    {"closest fit picks the smaller leftover", {7, 7}, {61, 70, 60}, {0, 1, 1}, {69, 0}},
    {"unmet request does not block later ones", {0}, {200, 60}, {kUnmet, 0}, {0}},
    {"four robots six requests", {0, 3, 6, 12}, {90, 60, 100, 75, 60, 60}, {1, 0, 3, 3, 2, 2},
     {0, 0, 0, 5}},
    {"leftover of exactly ten is not a close fit", {12, 12, 12}, {170, 175, 60}, {0, 1, 2},
     {10, 5, 120}},
    {"everything unmet", {0, 1}, {80, 90}, {kUnmet, kUnmet}, {60, 70}},
    {"empty fleet", {}, {60}, {kUnmet}, {}},
};

struct Forward {
  double recon = 0.0;
  double kld = 0.0;
  double min_relu_margin = std::numeric_limits<double>::infinity();
};

// Scalar-loop forward pass, independent of the Eigen implementation.
inline Forward forward_loops(const VaeModel& m, const MatrixXd& x, const MatrixXd& eps) {
  Forward f;
  const int in = m.arch.input_dim, hid = m.arch.hidden_dim, lat = m.arch.latent_dim;
  const auto n = x.cols();
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<double> h1(hid), mu(lat), lv(lat), z(lat), h2(hid);
    for (int j = 0; j < hid; ++j) {
      double a = m.enc_hidden.bias(j);
      for (int i = 0; i < in; ++i) a += m.enc_hidden.weight(j, i) * x(i, c);
      f.min_relu_margin = std::min(f.min_relu_margin, std::abs(a));
      h1[j] = a > 0 ? a : 0;
    }
    for (int l = 0; l < 2 * lat; ++l) {
      double a = m.enc_head.bias(l);
      for (int j = 0; j < hid; ++j) a += m.enc_head.weight(l, j) * h1[j];
      (l < lat ? mu[l] : lv[l - lat]) = a;
    }
    for (int l = 0; l < lat; ++l) {
      z[l] = mu[l] + std::exp(0.5 * lv[l]) * eps(l, c);
      f.kld += -0.5 * (1 + lv[l] - mu[l] * mu[l] - std::exp(lv[l]));
    }
    for (int j = 0; j < hid; ++j) {
      double a = m.dec_hidden.bias(j);
      for (int l = 0; l < lat; ++l) a += m.dec_hidden.weight(j, l) * z[l];
      f.min_relu_margin = std::min(f.min_relu_margin, std::abs(a));
      h2[j] = a > 0 ? a : 0;
    }
    for (int i = 0; i < in; ++i) {
      double a = m.dec_out.bias(i);
      for (int j = 0; j < hid; ++j) a += m.dec_out.weight(i, j) * h2[j];
      const double y = 1.0 / (1.0 + std::exp(-a));
      f.recon += (y - x(i, c)) * (y - x(i, c));
    }
  }
  f.recon /= static_cast<double>(n);
  f.kld /= static_cast<double>(n);
  return f;
}

inline MatrixXd uniform_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.uniform01();
  return m;
}

inline MatrixXd normal_matrix(Eigen::Index r, Eigen::Index c, Rng& rng) {
  MatrixXd m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = rng.normal();
  return m;
}

inline double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale < 1e-9 ? std::abs(a - b) : std::abs(a - b) / scale;
}


// Worst relative error between analytic and central-difference gradients
// over every parameter, with the reparameterization noise held fixed.
inline double worst_gradient_error(VaeModel model, const MatrixXd& x, const MatrixXd& eps,
                                   const LossConfig& cfg, double h = 1e-5) {
  VaeGradients g;
  loss_with_noise(model, x, eps, cfg, &g);
  double worst = 0.0;
  auto layers = model.layers();
  auto glayers = g.layers();
  for (std::size_t li = 0; li < layers.size(); ++li) {
    auto check_param = [&](double& p, double analytic) {
      const double saved = p;
      p = saved + h;
      const double up = loss_with_noise(model, x, eps, cfg).total;
      p = saved - h;
      const double down = loss_with_noise(model, x, eps, cfg).total;
      p = saved;
      worst = std::max(worst, relative_error(analytic, (up - down) / (2 * h)));
    };
    for (Eigen::Index r = 0; r < layers[li]->weight.rows(); ++r)
      for (Eigen::Index c = 0; c < layers[li]->weight.cols(); ++c)
        check_param(layers[li]->weight(r, c), glayers[li]->weight(r, c));
    for (Eigen::Index r = 0; r < layers[li]->bias.size(); ++r)
      check_param(layers[li]->bias(r), glayers[li]->bias(r));
  }
  return worst;
}

}  // namespace fixture
