#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coil/rng.hpp"

namespace coil {

/// Four affine layers: encoder input->hidden (ReLU), hidden->2*latent
/// producing (mu, logvar); decoder latent->hidden (ReLU), hidden->input
/// (sigmoid).
struct VaeArchitecture {
  int input_dim = 60;
  int hidden_dim = 128;
  int latent_dim = 40;

  void validate() const;
  friend bool operator==(const VaeArchitecture&, const VaeArchitecture&) = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out

  int in_dim() const noexcept { return static_cast<int>(weight.cols()); }
  int out_dim() const noexcept { return static_cast<int>(weight.rows()); }
};

struct TrainMeta {
  int epochs = 0;
  double learning_rate = 0.0;
  double initial_loss = 0.0;  // full-dataset loss before the first update
  double final_loss = 0.0;    // full-dataset loss after the last epoch
  std::uint64_t seed = 0;
  int restart_index = 0;
};

struct VaeModel {
  VaeArchitecture arch;
  DenseLayer enc_hidden;
  DenseLayer enc_head;
  DenseLayer dec_hidden;
  DenseLayer dec_out;
  TrainMeta meta;

  /// The four layers in file order.
  std::vector<DenseLayer*> layers();
  std::vector<const DenseLayer*> layers() const;
  bool all_finite() const;
};

/// How the KL term enters the total loss. The reported `kld` is always the
/// sum over latent dimensions; kMeanOverLatent divides it by latent_dim
/// before weighting. With the summed form and weight 1 the posterior
/// collapses onto the prior for schedule data in [0, 1], and the decoder
/// then emits the dataset mean for every z.
enum class KldReduction { kMeanOverLatent, kSum };

std::string to_string(KldReduction r);
KldReduction kld_reduction_from_string(const std::string& s);

struct LossConfig {
  double kld_weight = 1.0;
  KldReduction kld_reduction = KldReduction::kMeanOverLatent;
};

struct TrainConfig {
  int epochs = 200;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double kld_weight = 1.0;
  KldReduction kld_reduction = KldReduction::kMeanOverLatent;
  int batch_size = 64;
  int restarts = 10;
  /// Restarts run concurrently in this many threads; results do not depend
  /// on it.
  int threads = 1;

  void validate() const;
  LossConfig loss_config() const { return {kld_weight, kld_reduction}; }
};

struct Posterior {
  Eigen::VectorXd mu;
  Eigen::VectorXd logvar;
};

struct LossTerms {
  double total = 0.0;
  double reconstruction = 0.0;
  double kld = 0.0;
};

/// Per-layer parameter gradients, same shapes as the model's layers.
struct VaeGradients {
  DenseLayer enc_hidden;
  DenseLayer enc_head;
  DenseLayer dec_hidden;
  DenseLayer dec_out;

  std::vector<DenseLayer*> layers();
};

/// Weights and biases uniform in +-1/sqrt(fan_in).
VaeModel init_model(const VaeArchitecture& arch, Rng& rng);
VaeModel zero_model(const VaeArchitecture& arch);

Posterior encode(const VaeModel& model, std::span<const double> x);
/// z = mu + exp(logvar / 2) * eps, eps ~ N(0, I).
Eigen::VectorXd reparameterize(const Eigen::VectorXd& mu, const Eigen::VectorXd& logvar,
                               Rng& rng);
Eigen::VectorXd decode(const VaeModel& model, std::span<const double> z);

/// Loss on a batch whose columns are samples. `noise` (latent_dim x n) fixes
/// the reparameterization draws so the loss is a deterministic function of
/// the parameters. Fills `grads` when non-null.
///
///   reconstruction = mean_n sum_d (xhat - x)^2
///   kld            = mean_n -1/2 sum_l (1 + logvar - mu^2 - exp(logvar))
///   total          = reconstruction + kld_weight * kld [/ latent_dim]
LossTerms loss_with_noise(const VaeModel& model, const Eigen::MatrixXd& batch,
                          const Eigen::MatrixXd& noise, const LossConfig& config = {},
                          VaeGradients* grads = nullptr);

/// Same, drawing the noise from `rng`.
LossTerms loss(const VaeModel& model, const Eigen::MatrixXd& batch, Rng& rng,
               const LossConfig& config = {});

/// Packs dataset rows into a dim x n matrix.
Eigen::MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows);

struct RestartReport {
  int restart_index = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  bool diverged = false;
  double wall_time_s = 0.0;
};

struct TrainReport {
  std::vector<RestartReport> restarts;
  int selected = -1;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

/// One training run: `epochs` epochs of shuffled mini-batch Adam from a
/// fresh initialization.
VaeModel train_once(const Eigen::MatrixXd& data, const VaeArchitecture& arch,
                    const TrainConfig& config, Rng& rng);

/// Runs config.restarts independent trainings and keeps the one with the
/// lowest final full-dataset loss. Diverged restarts are dropped with a
/// warning; throws DivergenceError if none survive.
VaeModel train(const std::vector<std::vector<double>>& rows, const VaeArchitecture& arch,
               const TrainConfig& config, Rng& rng, TrainReport* report = nullptr);

}  // namespace coil
