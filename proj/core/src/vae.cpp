#include "coil/vae.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <thread>

#include "coil/errors.hpp"

namespace coil {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kBatchStream = 1;
constexpr std::uint64_t kEvalNoiseStream = 0xE7A1;

DenseLayer zero_layer(int in, int out) {
  return {MatrixXd::Zero(out, in), VectorXd::Zero(out)};
}

DenseLayer random_layer(int in, int out, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  DenseLayer layer = zero_layer(in, out);
  // Row-major fill order so the draw sequence matches the file layout.
  for (int r = 0; r < out; ++r)
    for (int c = 0; c < in; ++c) layer.weight(r, c) = rng.uniform(-bound, bound);
  for (int r = 0; r < out; ++r) layer.bias(r) = rng.uniform(-bound, bound);
  return layer;
}

MatrixXd affine(const DenseLayer& layer, const MatrixXd& x) {
  return (layer.weight * x).colwise() + layer.bias;
}

MatrixXd sigmoid(const MatrixXd& x) {
  return (1.0 + (-x.array()).exp()).inverse().matrix();
}

void check_input(std::span<const double> v, int expected, const char* what) {
  if (static_cast<int>(v.size()) != expected)
    throw ShapeError(std::string(what) + ": expected length " + std::to_string(expected) +
                     ", got " + std::to_string(v.size()));
  for (double x : v)
    if (!std::isfinite(x)) throw BoundsError(std::string(what) + ": non-finite input");
}

MatrixXd as_column(std::span<const double> v) {
  return Eigen::Map<const VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

MatrixXd draw_noise(int latent, Eigen::Index n, Rng& rng) {
  MatrixXd noise(latent, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (int r = 0; r < latent; ++r) noise(r, c) = rng.normal();
  return noise;
}

struct AdamState {
  std::vector<MatrixXd> m_w, v_w;
  std::vector<VectorXd> m_b, v_b;
  long step = 0;

  explicit AdamState(const VaeModel& model) {
    for (const DenseLayer* l : model.layers()) {
      m_w.push_back(MatrixXd::Zero(l->weight.rows(), l->weight.cols()));
      v_w.push_back(m_w.back());
      m_b.push_back(VectorXd::Zero(l->bias.size()));
      v_b.push_back(m_b.back());
    }
  }

  void apply(VaeModel& model, VaeGradients& grads, const TrainConfig& cfg) {
    ++step;
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    auto layers = model.layers();
    auto glayers = grads.layers();
    auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
      m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
      v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.cwiseProduct(g);
      param.array() -= cfg.learning_rate * (m.array() / c1) /
                       ((v.array() / c2).sqrt() + cfg.epsilon);
    };
    for (std::size_t i = 0; i < layers.size(); ++i) {
      update(layers[i]->weight, glayers[i]->weight, m_w[i], v_w[i]);
      update(layers[i]->bias, glayers[i]->bias, m_b[i], v_b[i]);
    }
  }
};

VaeModel train_run(const MatrixXd& data, const VaeArchitecture& arch, const TrainConfig& cfg,
                   Rng run_rng, const MatrixXd& eval_noise) {
  Rng init_rng = run_rng.split(kInitStream);
  Rng batch_rng = run_rng.split(kBatchStream);
  VaeModel model = init_model(arch, init_rng);
  model.meta.epochs = cfg.epochs;
  model.meta.learning_rate = cfg.learning_rate;
  model.meta.seed = run_rng.seed();
  model.meta.initial_loss = loss_with_noise(model, data, eval_noise, cfg.loss_config()).total;

  const Eigen::Index n = data.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  AdamState adam(model);
  VaeGradients grads;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[batch_rng.index(i)]);
    for (Eigen::Index start = 0; start < n; start += cfg.batch_size) {
      const Eigen::Index count = std::min<Eigen::Index>(cfg.batch_size, n - start);
      MatrixXd batch(data.rows(), count);
      for (Eigen::Index c = 0; c < count; ++c)
        batch.col(c) = data.col(order[static_cast<std::size_t>(start + c)]);
      const MatrixXd noise = draw_noise(arch.latent_dim, count, batch_rng);
      const LossTerms terms = loss_with_noise(model, batch, noise, cfg.loss_config(), &grads);
      if (!std::isfinite(terms.total)) {
        model.meta.final_loss = terms.total;
        return model;
      }
      adam.apply(model, grads, cfg);
    }
  }
  model.meta.final_loss = loss_with_noise(model, data, eval_noise, cfg.loss_config()).total;
  return model;
}

}  // namespace

void VaeArchitecture::validate() const {
  if (input_dim < 1 || hidden_dim < 1 || latent_dim < 1)
    throw InvalidConfigError("VAE dimensions must be >= 1");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidConfigError("epochs must be >= 1");
  if (restarts < 1) throw InvalidConfigError("restarts must be >= 1");
  if (batch_size < 1) throw InvalidConfigError("batch_size must be >= 1");
  if (threads < 1) throw InvalidConfigError("threads must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidConfigError("learning_rate must be > 0");
}

std::vector<DenseLayer*> VaeModel::layers() {
  return {&enc_hidden, &enc_head, &dec_hidden, &dec_out};
}

std::vector<const DenseLayer*> VaeModel::layers() const {
  return {&enc_hidden, &enc_head, &dec_hidden, &dec_out};
}

std::vector<DenseLayer*> VaeGradients::layers() {
  return {&enc_hidden, &enc_head, &dec_hidden, &dec_out};
}

bool VaeModel::all_finite() const {
  for (const DenseLayer* l : layers())
    if (!l->weight.allFinite() || !l->bias.allFinite()) return false;
  return true;
}

VaeModel zero_model(const VaeArchitecture& arch) {
  arch.validate();
  VaeModel m;
  m.arch = arch;
  m.enc_hidden = zero_layer(arch.input_dim, arch.hidden_dim);
  m.enc_head = zero_layer(arch.hidden_dim, 2 * arch.latent_dim);
  m.dec_hidden = zero_layer(arch.latent_dim, arch.hidden_dim);
  m.dec_out = zero_layer(arch.hidden_dim, arch.input_dim);
  return m;
}

VaeModel init_model(const VaeArchitecture& arch, Rng& rng) {
  arch.validate();
  VaeModel m;
  m.arch = arch;
  m.enc_hidden = random_layer(arch.input_dim, arch.hidden_dim, rng);
  m.enc_head = random_layer(arch.hidden_dim, 2 * arch.latent_dim, rng);
  m.dec_hidden = random_layer(arch.latent_dim, arch.hidden_dim, rng);
  m.dec_out = random_layer(arch.hidden_dim, arch.input_dim, rng);
  return m;
}

Posterior encode(const VaeModel& model, std::span<const double> x) {
  check_input(x, model.arch.input_dim, "encode");
  const MatrixXd h = affine(model.enc_hidden, as_column(x)).cwiseMax(0.0);
  const MatrixXd head = affine(model.enc_head, h);
  const int latent = model.arch.latent_dim;
  return {head.col(0).head(latent), head.col(0).tail(latent)};
}

VectorXd reparameterize(const VectorXd& mu, const VectorXd& logvar, Rng& rng) {
  if (mu.size() != logvar.size()) throw ShapeError("reparameterize: mu/logvar size mismatch");
  VectorXd z(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    z(i) = mu(i) + std::exp(0.5 * logvar(i)) * rng.normal();
  return z;
}

VectorXd decode(const VaeModel& model, std::span<const double> z) {
  check_input(z, model.arch.latent_dim, "decode");
  const MatrixXd h = affine(model.dec_hidden, as_column(z)).cwiseMax(0.0);
  return sigmoid(affine(model.dec_out, h)).col(0);
}

std::string to_string(KldReduction r) {
  return r == KldReduction::kMeanOverLatent ? "mean_over_latent" : "sum";
}

KldReduction kld_reduction_from_string(const std::string& s) {
  if (s == "mean_over_latent") return KldReduction::kMeanOverLatent;
  if (s == "sum") return KldReduction::kSum;
  throw InvalidConfigError("unknown kld reduction: " + s);
}

LossTerms loss_with_noise(const VaeModel& model, const MatrixXd& batch, const MatrixXd& noise,
                          const LossConfig& config, VaeGradients* grads) {
  const int latent = model.arch.latent_dim;
  const Eigen::Index n = batch.cols();
  if (batch.rows() != model.arch.input_dim) throw ShapeError("loss: batch row count mismatch");
  if (noise.rows() != latent || noise.cols() != n) throw ShapeError("loss: noise shape mismatch");
  if (n == 0) throw PreconditionError("loss: empty batch");

  // Forward.
  const MatrixXd pre1 = affine(model.enc_hidden, batch);
  const MatrixXd h1 = pre1.cwiseMax(0.0);
  const MatrixXd head = affine(model.enc_head, h1);
  const MatrixXd mu = head.topRows(latent);
  const MatrixXd logvar = head.bottomRows(latent);
  const MatrixXd var = logvar.array().exp().matrix();
  const MatrixXd sd = (0.5 * logvar.array()).exp().matrix();
  const MatrixXd z = mu + sd.cwiseProduct(noise);
  const MatrixXd pre3 = affine(model.dec_hidden, z);
  const MatrixXd h2 = pre3.cwiseMax(0.0);
  const MatrixXd xhat = sigmoid(affine(model.dec_out, h2));
  const MatrixXd diff = xhat - batch;

  const double inv_n = 1.0 / static_cast<double>(n);
  const double kld_weight = config.kld_reduction == KldReduction::kMeanOverLatent
                                ? config.kld_weight / latent
                                : config.kld_weight;
  LossTerms out;
  out.reconstruction = diff.squaredNorm() * inv_n;
  out.kld = -0.5 * (1.0 + logvar.array() - mu.array().square() - var.array()).sum() * inv_n;
  out.total = out.reconstruction + kld_weight * out.kld;
  if (grads == nullptr) return out;

  // Backward.
  const MatrixXd d_pre4 = (2.0 * inv_n * diff.array() * xhat.array() * (1.0 - xhat.array())).matrix();
  grads->dec_out.weight = d_pre4 * h2.transpose();
  grads->dec_out.bias = d_pre4.rowwise().sum();

  const MatrixXd d_pre3 =
      ((model.dec_out.weight.transpose() * d_pre4).array() * (pre3.array() > 0.0).cast<double>())
          .matrix();
  grads->dec_hidden.weight = d_pre3 * z.transpose();
  grads->dec_hidden.bias = d_pre3.rowwise().sum();

  const MatrixXd d_z = model.dec_hidden.weight.transpose() * d_pre3;
  MatrixXd d_head(2 * latent, n);
  d_head.topRows(latent) = d_z + (kld_weight * inv_n) * mu;
  d_head.bottomRows(latent) =
      (d_z.array() * noise.array() * 0.5 * sd.array() +
       (kld_weight * inv_n * 0.5) * (var.array() - 1.0))
          .matrix();
  grads->enc_head.weight = d_head * h1.transpose();
  grads->enc_head.bias = d_head.rowwise().sum();

  const MatrixXd d_pre1 =
      ((model.enc_head.weight.transpose() * d_head).array() * (pre1.array() > 0.0).cast<double>())
          .matrix();
  grads->enc_hidden.weight = d_pre1 * batch.transpose();
  grads->enc_hidden.bias = d_pre1.rowwise().sum();
  return out;
}

LossTerms loss(const VaeModel& model, const MatrixXd& batch, Rng& rng, const LossConfig& config) {
  const MatrixXd noise = draw_noise(model.arch.latent_dim, batch.cols(), rng);
  return loss_with_noise(model, batch, noise, config);
}

MatrixXd rows_to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return MatrixXd(0, 0);
  const auto dim = static_cast<Eigen::Index>(rows.front().size());
  MatrixXd out(dim, static_cast<Eigen::Index>(rows.size()));
  for (std::size_t c = 0; c < rows.size(); ++c) {
    if (static_cast<Eigen::Index>(rows[c].size()) != dim)
      throw ShapeError("dataset rows have inconsistent lengths");
    out.col(static_cast<Eigen::Index>(c)) = as_column(rows[c]);
  }
  return out;
}

VaeModel train_once(const MatrixXd& data, const VaeArchitecture& arch, const TrainConfig& config,
                    Rng& rng) {
  config.validate();
  arch.validate();
  if (data.cols() == 0) throw PreconditionError("train: empty dataset");
  if (data.rows() != arch.input_dim) throw ShapeError("train: dataset width != input_dim");
  Rng eval_rng = rng.split(kEvalNoiseStream);
  const MatrixXd eval_noise = draw_noise(arch.latent_dim, data.cols(), eval_rng);
  return train_run(data, arch, config, rng.split(0), eval_noise);
}

VaeModel train(const std::vector<std::vector<double>>& rows, const VaeArchitecture& arch,
               const TrainConfig& config, Rng& rng, TrainReport* report) {
  config.validate();
  arch.validate();
  if (rows.empty()) throw PreconditionError("train: empty dataset");
  const MatrixXd data = rows_to_matrix(rows);
  if (data.rows() != arch.input_dim) throw ShapeError("train: dataset width != input_dim");

  const auto started = std::chrono::steady_clock::now();
  // Every restart is scored on the same noise draw so their losses compare.
  Rng eval_rng = rng.split(kEvalNoiseStream);
  const MatrixXd eval_noise = draw_noise(arch.latent_dim, data.cols(), eval_rng);

  const auto count = static_cast<std::size_t>(config.restarts);
  std::vector<VaeModel> models(count);
  std::vector<double> seconds(count, 0.0);
  auto run = [&](std::size_t r) {
    const auto t0 = std::chrono::steady_clock::now();
    models[r] = train_run(data, arch, config, rng.split(r), eval_noise);
    models[r].meta.restart_index = static_cast<int>(r);
    seconds[r] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  if (config.threads == 1) {
    for (std::size_t r = 0; r < count; ++r) run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    for (int t = 0; t < config.threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t r = next++; r < count; r = next++) run(r);
      });
    }
  }

  TrainReport local;
  TrainReport& rep = report != nullptr ? *report : local;
  rep = TrainReport{};
  for (std::size_t r = 0; r < count; ++r) {
    const auto& meta = models[r].meta;
    const bool diverged = !std::isfinite(meta.final_loss) || !models[r].all_finite();
    rep.restarts.push_back(
        {static_cast<int>(r), meta.initial_loss, meta.final_loss, diverged, seconds[r]});
    if (diverged) {
      rep.warnings.push_back("VAE restart " + std::to_string(r) + " diverged; discarded");
      continue;
    }
    if (rep.selected < 0 || meta.final_loss < models[static_cast<std::size_t>(rep.selected)].meta.final_loss)
      rep.selected = static_cast<int>(r);
  }
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (rep.selected < 0) throw DivergenceError("all VAE training restarts diverged");
  return models[static_cast<std::size_t>(rep.selected)];
}

}  // namespace coil
