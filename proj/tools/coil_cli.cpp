#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "coil/datagen.hpp"
#include "coil/errors.hpp"
#include "coil/experiments.hpp"
#include "coil/io.hpp"
#include "coil/latent.hpp"
#include "coil/optimize.hpp"
#include "coil/stats.hpp"
#include "coil/vae.hpp"

namespace fs = std::filesystem;
using namespace coil;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
  std::uint64_t seed = 1;
  std::string profile = "desk";
  std::string out;
  int threads = 1;
};

struct ProblemFlags {
  std::optional<int> rb, rt, rq, dr;

  void add(CLI::App* app) {
    app->add_option("--rb", rb, "Robots");
    app->add_option("--rt", rt, "Max robots running in one slot");
    app->add_option("--rq", rq, "Requests per day");
    app->add_option("--dr", dr, "Max request duration (minutes)");
  }
  void apply(ProblemConfig& p) const {
    if (rb) p.rb = *rb;
    if (rt) p.rt = *rt;
    if (rq) p.rq = *rq;
    if (dr) p.dr = *dr;
  }
};

struct GaFlags {
  std::optional<int> population_size, generations, tournaments_per_eval;
  std::optional<double> crossover_prob, mutation_prob_per_gene, creep_sigma;

  void add(CLI::App* app) {
    app->add_option("--population_size", population_size, "GA population");
    app->add_option("--generations", generations, "GA generations");
    app->add_option("--tournaments_per_eval", tournaments_per_eval, "Tournament rounds per individual");
    app->add_option("--crossover_prob", crossover_prob, "Two-point crossover probability");
    app->add_option("--mutation_prob_per_gene", mutation_prob_per_gene, "Negative means 1/length");
    app->add_option("--creep_sigma", creep_sigma, "Non-positive means the genome default");
  }
  void apply(GaConfig& g) const {
    if (population_size) g.population_size = *population_size;
    if (generations) g.generations = *generations;
    if (tournaments_per_eval) g.tournaments_per_eval = *tournaments_per_eval;
    if (crossover_prob) g.crossover_prob = *crossover_prob;
    if (mutation_prob_per_gene) g.mutation_prob_per_gene = *mutation_prob_per_gene;
    if (creep_sigma) g.creep_sigma = *creep_sigma;
  }
};

struct DatagenFlags {
  std::optional<int> population_size, generations, max_restarts;

  void add(CLI::App* app) {
    app->add_option("--datagen_population_size", population_size, "Mining GA population");
    app->add_option("--datagen_generations", generations, "Mining GA generations per restart");
    app->add_option("--max_restarts", max_restarts, "Mining restart budget");
  }
  void apply(DatagenConfig& d) const {
    if (population_size) d.population_size = *population_size;
    if (generations) d.generations = *generations;
    if (max_restarts) d.max_restarts = *max_restarts;
  }
};

struct TrainFlags {
  std::optional<int> epochs, batch_size, restarts, hidden_dim, maxlv;
  std::optional<double> learning_rate, beta1, beta2, epsilon, kld_weight;
  std::optional<std::string> kld_reduction;

  void add(CLI::App* app, bool with_arch) {
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--learning_rate", learning_rate, "Adam learning rate");
    app->add_option("--beta1", beta1, "Adam beta1");
    app->add_option("--beta2", beta2, "Adam beta2");
    app->add_option("--epsilon", epsilon, "Adam epsilon");
    app->add_option("--kld_weight", kld_weight, "KL term weight");
    app->add_option("--kld_reduction", kld_reduction, "mean_over_latent or sum")
        ->check(CLI::IsMember({"mean_over_latent", "sum"}));
    app->add_option("--batch_size", batch_size, "Mini-batch size");
    app->add_option("--restarts", restarts, "Independent trainings; the best is kept");
    if (with_arch) {
      app->add_option("--hidden_dim", hidden_dim, "Hidden layer width");
      app->add_option("--maxlv", maxlv, "Latent width is 2 * maxlv");
    }
  }
  void apply(TrainConfig& t) const {
    if (epochs) t.epochs = *epochs;
    if (learning_rate) t.learning_rate = *learning_rate;
    if (beta1) t.beta1 = *beta1;
    if (beta2) t.beta2 = *beta2;
    if (epsilon) t.epsilon = *epsilon;
    if (kld_weight) t.kld_weight = *kld_weight;
    if (kld_reduction) t.kld_reduction = kld_reduction_from_string(*kld_reduction);
    if (batch_size) t.batch_size = *batch_size;
    if (restarts) t.restarts = *restarts;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  app->add_option("--profile", c.profile, "Scale profile")
      ->check(CLI::IsMember({"desk", "paper"}))
      ->capture_default_str();
  app->add_option("--out", c.out, "Run directory (default runs/<command>-<timestamp>)");
  app->add_option("--threads", c.threads, "Worker threads; results do not depend on it")
      ->capture_default_str();
}

fs::path run_dir(const Common& c, const std::string& command) {
  if (!c.out.empty()) return c.out;
  std::string stamp = io::utc_timestamp();
  for (char& ch : stamp)
    if (ch == ':') ch = '-';
  return fs::path("runs") / (command + "-" + stamp);
}

io::Manifest new_manifest(const std::string& command, const Common& c) {
  io::Manifest m;
  m.tool_version = kVersion;
  m.command = command;
  m.seed = c.seed;
  m.created_utc = io::utc_timestamp();
  m.config["profile"] = c.profile;
  return m;
}

void record_input(io::Manifest& m, const std::string& name, const fs::path& path) {
  m.config["input." + name + ".path"] = fs::absolute(path).string();
  m.config["input." + name + ".sha256"] = io::sha256_file(path);
}

void problem_config(io::Manifest& m, const ProblemConfig& p) {
  m.config["rb"] = std::to_string(p.rb);
  m.config["rt"] = std::to_string(p.rt);
  m.config["rq"] = std::to_string(p.rq);
  m.config["dr"] = std::to_string(p.dr);
}

void ga_config(io::Manifest& m, const GaConfig& g) {
  m.config["population_size"] = std::to_string(g.population_size);
  m.config["generations"] = std::to_string(g.generations);
  m.config["tournaments_per_eval"] = std::to_string(g.tournaments_per_eval);
  m.config["crossover_prob"] = io::format_real(g.crossover_prob);
  m.config["mutation_prob_per_gene"] = io::format_real(g.mutation_prob_per_gene);
  m.config["creep_sigma"] = io::format_real(g.creep_sigma);
}

void train_config(io::Manifest& m, const TrainConfig& t, const VaeArchitecture& a) {
  m.config["input_dim"] = std::to_string(a.input_dim);
  m.config["hidden_dim"] = std::to_string(a.hidden_dim);
  m.config["latent_dim"] = std::to_string(a.latent_dim);
  m.config["epochs"] = std::to_string(t.epochs);
  m.config["learning_rate"] = io::format_real(t.learning_rate);
  m.config["beta1"] = io::format_real(t.beta1);
  m.config["beta2"] = io::format_real(t.beta2);
  m.config["epsilon"] = io::format_real(t.epsilon);
  m.config["kld_weight"] = io::format_real(t.kld_weight);
  m.config["kld_reduction"] = to_string(t.kld_reduction);
  m.config["batch_size"] = std::to_string(t.batch_size);
  m.config["restarts"] = std::to_string(t.restarts);
}

void emit(io::Manifest& m, const fs::path& dir, const std::string& name, const std::string& rel,
          const std::string& text) {
  io::write_file(dir / rel, text);
  m.add_artifact(dir, name, rel);
}

void finish(const io::Manifest& m, const fs::path& dir) {
  io::save_manifest(dir / "manifest.txt", m);
  std::cout << "run directory: " << dir.string() << "\n";
}

Profile profile_of(const Common& c) { return profile_from_string(c.profile); }

// gen-data

struct GenDataArgs {
  Common common;
  ProblemFlags problem;
  DatagenFlags datagen;
  std::optional<std::size_t> ds;
};

int cmd_gen_data(const GenDataArgs& a) {
  ProblemConfig p;
  a.problem.apply(p);
  DatagenConfig d;
  a.datagen.apply(d);
  d.threads = a.common.threads;
  const std::size_t ds = a.ds.value_or(profile_of(a.common) == Profile::kDesk ? 1000 : 10000);
  p.seed = a.common.seed;

  const fs::path dir = run_dir(a.common, "gen-data");
  auto m = new_manifest("gen-data", a.common);
  problem_config(m, p);
  m.config["ds"] = std::to_string(ds);
  m.config["datagen_population_size"] = std::to_string(d.population_size);
  m.config["datagen_generations"] = std::to_string(d.generations);
  m.config["max_restarts"] = std::to_string(d.max_restarts);

  Rng rng(a.common.seed);
  Dataset dataset;
  int status = 0;
  try {
    dataset = generate_dataset(p, ds, d, rng);
  } catch (const PartialDatasetError& e) {
    std::cerr << "warning: " << e.what() << "; saving the partial dataset\n";
    dataset = e.partial();
    status = 3;
  }
  fs::create_directories(dir);
  io::save_dataset(dir / "dataset.csv", dataset);
  m.add_artifact(dir, "dataset", "dataset.csv");
  m.add_artifact(dir, "dataset_meta", "dataset.csv.meta");
  finish(m, dir);
  std::cout << dataset.size() << " rows mined in " << dataset.meta.restarts << " restarts, "
            << dataset.meta.wall_time_s << " s\n";
  return status;
}

// train-vae

struct TrainArgs {
  Common common;
  TrainFlags train;
  std::string dataset;
};

int cmd_train(const TrainArgs& a) {
  const Dataset data = io::load_dataset(a.dataset);
  if (data.size() == 0) throw PreconditionError("dataset is empty");
  TrainConfig t;
  t.restarts = profile_of(a.common) == Profile::kDesk ? 3 : 10;
  a.train.apply(t);
  t.threads = a.common.threads;
  VaeArchitecture arch;
  arch.input_dim = static_cast<int>(data.dim());
  arch.hidden_dim = a.train.hidden_dim.value_or(128);
  arch.latent_dim = 2 * a.train.maxlv.value_or(30);

  const fs::path dir = run_dir(a.common, "train-vae");
  auto m = new_manifest("train-vae", a.common);
  record_input(m, "dataset", a.dataset);
  train_config(m, t, arch);

  Rng rng(a.common.seed);
  TrainReport report;
  const VaeModel model = train(data.rows, arch, t, rng, &report);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";

  fs::create_directories(dir);
  io::save_model(dir / "model.vae", model);
  m.add_artifact(dir, "model", "model.vae");
  std::string csv = "restart,initial_loss,final_loss,diverged,wall_time_s,selected\n";
  for (const auto& r : report.restarts)
    csv += std::to_string(r.restart_index) + "," + io::format_real(r.initial_loss) + "," +
           io::format_real(r.final_loss) + "," + (r.diverged ? "1" : "0") + "," +
           io::format_real(r.wall_time_s) + "," + (r.restart_index == report.selected ? "1" : "0") +
           "\n";
  emit(m, dir, "train_report", "train_report.csv", csv);
  finish(m, dir);
  std::cout << "selected restart " << report.selected << ", final loss " << model.meta.final_loss
            << ", " << report.wall_time_s << " s\n";
  return 0;
}

// optimize

struct OptimizeArgs {
  Common common;
  ProblemFlags problem;
  GaFlags ga;
  std::string algorithm = "baseline";
  std::string model;
  std::string requests;
  std::string measure = "violating_slots";
};

int cmd_optimize(const OptimizeArgs& a) {
  ProblemConfig p;
  a.problem.apply(p);
  p.seed = a.common.seed;
  p.validate();
  GaConfig ga;
  a.ga.apply(ga);
  const ConstraintMeasure measure = constraint_measure_from_string(a.measure);
  const Algorithm alg = algorithm_from_string(a.algorithm);

  const fs::path dir = run_dir(a.common, "optimize");
  auto m = new_manifest("optimize", a.common);
  problem_config(m, p);
  ga_config(m, ga);
  m.config["algorithm"] = a.algorithm;
  m.config["measure"] = a.measure;

  const Rng master(a.common.seed);
  RequestSet req;
  if (!a.requests.empty()) {
    req = io::load_requests(a.requests);
    record_input(m, "requests", a.requests);
  } else {
    Rng request_rng = master.split(0);
    req = generate_requests(p, request_rng);
  }

  OptimizeResult result;
  Rng ga_rng = master.split(1);
  if (alg == Algorithm::kBaseline) {
    result = run_baseline(req, p, ga, ga_rng, measure);
  } else {
    if (a.model.empty()) throw InvalidConfigError("--model is required for --algorithm coil");
    const VaeModel model = io::load_model(a.model);
    record_input(m, "model", a.model);
    result = run_coil(req, p, model, ga, ga_rng, measure);
  }

  fs::create_directories(dir);
  io::save_requests(dir / "requests.csv", req);
  m.add_artifact(dir, "requests", "requests.csv");
  io::save_schedule(dir / "schedule.csv", result.schedule);
  m.add_artifact(dir, "schedule", "schedule.csv");
  emit(m, dir, "allocation", "allocation.csv", io::allocation_csv(req, allocate(req, result.schedule)));
  emit(m, dir, "evaluations", "evaluations.csv",
       io::evaluations_csv({{0, result.worst_case}, {0, result.reported}}));
  emit(m, dir, "trace", "trace.csv", io::trace_csv(result.trace));
  finish(m, dir);
  std::cout << a.algorithm << ": objective " << result.reported.objective << ", violating slots "
            << result.reported.constraint.violating_slots << " (worst case "
            << result.worst_case.constraint.violating_slots << "), peak excess "
            << result.reported.constraint.peak_excess << ", utilization "
            << result.reported.utilization << "\n";
  return 0;
}

// experiment

struct ExperimentArgs {
  Common common;
  ProblemFlags problem;
  GaFlags ga;
  DatagenFlags datagen;
  TrainFlags train;
  std::string id = "E1.1";
  std::optional<int> runs_per_setting;
  std::optional<std::size_t> ds;
  std::optional<std::string> algorithms;
  std::string artifact_dir;
  std::string from_manifest;
  bool no_build = false;
};

int cmd_experiment(const ExperimentArgs& a) {
  ExperimentSpec spec;
  std::uint64_t seed = a.common.seed;
  if (!a.from_manifest.empty()) {
    const io::Manifest prior = io::load_manifest(a.from_manifest);
    spec = spec_from_config(prior.config);
    seed = prior.seed;
  } else {
    spec = make_experiment(a.id, profile_of(a.common));
    for (auto& s : spec.settings) {
      ProblemConfig p = s.problem;
      a.problem.apply(p);
      s.problem = p;
      if (a.ds) s.ds = *a.ds;
      if (a.train.maxlv) s.maxlv = *a.train.maxlv;
    }
    if (a.runs_per_setting) spec.runs_per_setting = *a.runs_per_setting;
    if (a.train.hidden_dim) spec.hidden_dim = *a.train.hidden_dim;
    if (a.algorithms) {
      spec.run_baseline = *a.algorithms != "coil";
      spec.run_coil = *a.algorithms != "baseline";
    }
    a.ga.apply(spec.ga);
    a.datagen.apply(spec.datagen);
    a.train.apply(spec.train);
  }
  spec.threads = a.common.threads;
  spec.build_artifacts = !a.no_build;

  const fs::path dir = run_dir(a.common, "experiment");
  spec.artifact_dir = a.artifact_dir.empty() ? dir / "artifacts" : fs::path(a.artifact_dir);
  spec.validate();

  Rng master(seed);
  const auto result = run_experiment(spec, master);
  write_run_directory(dir, spec, seed, result);
  std::cout << format_summary_table(result.summary);
  std::cout << "run directory: " << dir.string() << "\n";
  return 0;
}

// report

struct ReportArgs {
  std::string run_dir;
};

int cmd_report(const ReportArgs& a) {
  const fs::path dir = a.run_dir;
  const io::Manifest m = io::load_manifest(dir / "manifest.txt");
  const io::ArtifactEntry* rec = m.find("records");
  if (rec == nullptr) throw MissingArtifactError("manifest lists no run records", (dir / "records.csv").string());
  const auto records = io::parse_run_records_csv(io::read_file(dir / rec->path));
  const auto summary = summarize_records(records);

  std::string text = "experiment run " + m.created_utc + ", seed " + std::to_string(m.seed) + "\n\n";
  text += format_summary_table(summary);

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_setting;
  for (const auto& r : records) {
    auto& slot = by_setting[r.setting];
    (r.algorithm == Algorithm::kCoil ? slot.first : slot.second).push_back(r.violating_slots);
  }
  for (const auto& [setting, samples] : by_setting) {
    if (samples.first.empty() || samples.second.empty()) continue;
    const auto mw = stats::mann_whitney(samples.first, samples.second);
    text += "\n" + setting + ": Mann-Whitney U=" + io::format_real(mw.u) +
            ", one-sided p (coil lower)=" + io::format_real(mw.p_less) +
            ", two-sided p=" + io::format_real(mw.p_two_sided) + "\n";
  }
  if (const auto* timing = m.find("timing")) text += "\ntiming:\n" + io::read_file(dir / timing->path);
  io::write_file(dir / "report.txt", text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COIL robot scheduling: data generation, VAE training, optimization, experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Mine a dataset of constraint-valid schedules");
  add_common(gen_cmd, gen.common);
  gen.problem.add(gen_cmd);
  gen.datagen.add(gen_cmd);
  gen_cmd->add_option("--ds", gen.ds, "Rows to mine");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train-vae", "Train the VAE on a mined dataset");
  add_common(train_cmd, tr.common);
  tr.train.add(train_cmd, true);
  train_cmd->add_option("--dataset", tr.dataset, "Dataset CSV")->required()->check(CLI::ExistingFile);

  OptimizeArgs opt;
  auto* opt_cmd = app.add_subcommand("optimize", "Optimize one request set with the baseline GA or COIL");
  add_common(opt_cmd, opt.common);
  opt.problem.add(opt_cmd);
  opt.ga.add(opt_cmd);
  opt_cmd->add_option("--algorithm", opt.algorithm, "baseline or coil")
      ->check(CLI::IsMember({"baseline", "coil"}))
      ->capture_default_str();
  opt_cmd->add_option("--model", opt.model, "VAE model file (coil)")->check(CLI::ExistingFile);
  opt_cmd->add_option("--requests", opt.requests, "Request CSV; generated from the seed if omitted")
      ->check(CLI::ExistingFile);
  opt_cmd->add_option("--measure", opt.measure, "Constraint scalar used for selection")
      ->check(CLI::IsMember({"violating_slots", "peak_excess"}))
      ->capture_default_str();

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Run a named experiment (E1.1 .. E2.2 or custom)");
  add_common(ex_cmd, ex.common);
  ex.problem.add(ex_cmd);
  ex.ga.add(ex_cmd);
  ex.datagen.add(ex_cmd);
  ex.train.add(ex_cmd, true);
  ex_cmd->add_option("--id", ex.id, "Experiment id")
      ->check(CLI::IsMember({"E1.1", "E1.2", "E1.3", "E1.4", "E2.1", "E2.2", "custom"}))
      ->capture_default_str();
  ex_cmd->add_option("--runs_per_setting", ex.runs_per_setting, "Runs per setting and algorithm");
  ex_cmd->add_option("--ds", ex.ds, "Dataset size for every setting");
  ex_cmd->add_option("--algorithms", ex.algorithms, "baseline, coil or both")
      ->check(CLI::IsMember({"baseline", "coil", "both"}));
  ex_cmd->add_option("--artifact-dir", ex.artifact_dir, "Dataset/model cache (default <out>/artifacts)");
  ex_cmd->add_option("--from-manifest", ex.from_manifest, "Re-run the experiment recorded in a manifest")
      ->check(CLI::ExistingFile);
  ex_cmd->add_flag("--no-build", ex.no_build, "Fail instead of mining/training missing artifacts");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Summarize an experiment run directory");
  rep_cmd->add_option("--run-dir", rep.run_dir, "Run directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen_data(gen);
    if (*train_cmd) return cmd_train(tr);
    if (*opt_cmd) return cmd_optimize(opt);
    if (*ex_cmd) return cmd_experiment(ex);
    if (*rep_cmd) return cmd_report(rep);
  } catch (const MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const InvalidConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
