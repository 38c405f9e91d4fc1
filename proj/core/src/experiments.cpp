#include "coil/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <set>
#include <thread>

#include "coil/errors.hpp"
#include "coil/latent.hpp"
#include "coil/optimize.hpp"
#include "coil/scheduler.hpp"

namespace coil {

namespace fs = std::filesystem;

namespace {

// Stream ids under a setting's stream.
constexpr std::uint64_t kDatagenStream = 0xDA7A;
constexpr std::uint64_t kTrainStream = 0x7A1E;
constexpr std::uint64_t kRunStreamBase = 0x10000;
// Stream ids under a run's stream.
constexpr std::uint64_t kRequestStream = 0;
constexpr std::uint64_t kBaselineStream = 1;
constexpr std::uint64_t kCoilStream = 2;

constexpr std::string_view kToolVersion = "0.1.0";

const std::set<int> kGridRt = {10, 15, 20};
const std::set<int> kGridRb = {20, 25, 30};
const std::set<int> kGridMaxlv = {5, 10, 15, 20, 25, 30};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Setting base_setting(Profile profile) {
  Setting s;
  s.problem = ProblemConfig{};
  s.ds = profile == Profile::kDesk ? 1000 : 10000;
  s.maxlv = 30;
  return s;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  return s;
}

std::string setting_cache_key(const ExperimentSpec& spec, const Setting& s, const Rng& srng) {
  std::string key;
  key += std::to_string(s.problem.rb) + "|" + std::to_string(s.problem.rt) + "|" +
         std::to_string(s.ds) + "|" + std::to_string(s.maxlv) + "|" +
         std::to_string(srng.seed()) + "|" + std::to_string(spec.hidden_dim);
  const auto cfg = spec_to_config(spec);
  for (const auto& [k, v] : cfg)
    if (k.rfind("datagen.", 0) == 0 || k.rfind("train.", 0) == 0) key += "|" + k + "=" + v;
  return io::sha256_hex(key).substr(0, 12);
}

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  for (std::size_t t = 0; t < n; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
}

std::string fmt2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

int to_int(const std::string& v) { return static_cast<int>(io::parse_real(v)); }

}  // namespace

std::string to_string(Algorithm a) { return a == Algorithm::kBaseline ? "baseline" : "coil"; }

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "baseline" || s == "ga") return Algorithm::kBaseline;
  if (s == "coil") return Algorithm::kCoil;
  throw InvalidConfigError("unknown algorithm: " + s);
}

Profile profile_from_string(std::string_view s) {
  if (s == "desk") return Profile::kDesk;
  if (s == "paper") return Profile::kPaper;
  throw InvalidConfigError("unknown profile: " + std::string(s));
}

std::string to_string(Profile p) { return p == Profile::kDesk ? "desk" : "paper"; }

void ExperimentSpec::validate() const {
  if (runs_per_setting < 0) throw InvalidConfigError("runs_per_setting must be >= 0");
  if (!run_baseline && !run_coil) throw InvalidConfigError("no algorithm selected");
  if (threads < 1) throw InvalidConfigError("threads must be >= 1");
  ga.validate();
  train.validate();
  for (const auto& s : settings) {
    s.problem.validate();
    if (s.ds < 1) throw InvalidConfigError("ds must be >= 1");
    if (s.maxlv < 1) throw InvalidConfigError("maxlv must be >= 1");
  }
  if (id == "custom") return;
  for (const auto& s : settings) {
    const bool dr_on_grid = s.problem.dr >= 60 && s.problem.dr <= 360 && s.problem.dr % 20 == 0;
    if (!kGridRt.count(s.problem.rt) || !kGridRb.count(s.problem.rb) || !dr_on_grid ||
        !kGridMaxlv.count(s.maxlv))
      throw InvalidConfigError("setting '" + s.label + "' is off the experiment grid; use id=custom");
  }
}

ExperimentSpec make_experiment(std::string_view id, Profile profile) {
  ExperimentSpec spec;
  spec.id = std::string(id);
  const bool desk = profile == Profile::kDesk;
  spec.runs_per_setting = desk ? 20 : 100;
  spec.ga.population_size = 20;
  spec.ga.generations = 50;
  spec.train.restarts = desk ? 3 : 10;
  const Setting base = base_setting(profile);

  auto add = [&](std::string label, auto&& tweak) {
    Setting s = base;
    s.label = std::move(label);
    tweak(s);
    spec.settings.push_back(s);
  };

  if (id == "E1.1") {
    add("default", [](Setting&) {});
  } else if (id == "E1.2") {
    for (int rt : kGridRt) add("rt=" + std::to_string(rt), [rt](Setting& s) { s.problem.rt = rt; });
  } else if (id == "E1.3") {
    for (int rb : kGridRb) add("rb=" + std::to_string(rb), [rb](Setting& s) { s.problem.rb = rb; });
  } else if (id == "E1.4") {
    for (int dr = 60; dr <= 360; dr += 20)
      add("dr=" + std::to_string(dr), [dr](Setting& s) {
        s.problem.dr = dr;
        s.problem.rq = 240;
      });
  } else if (id == "E2.1") {
    spec.run_baseline = false;
    for (std::size_t ds : {2500u, 5000u, 7500u, 10000u}) {
      const std::size_t scaled = desk ? ds / 10 : ds;
      add("ds=" + std::to_string(scaled), [scaled](Setting& s) { s.ds = scaled; });
    }
  } else if (id == "E2.2") {
    spec.run_baseline = false;
    for (int lv : kGridMaxlv)
      add("maxlv=" + std::to_string(lv), [lv](Setting& s) { s.maxlv = lv; });
  } else if (id == "custom") {
    add("custom", [](Setting&) {});
  } else {
    throw InvalidConfigError("unknown experiment id: " + std::string(id));
  }
  return spec;
}

std::map<std::string, std::string> spec_to_config(const ExperimentSpec& spec) {
  using io::format_real;
  std::map<std::string, std::string> c;
  c["id"] = spec.id;
  c["runs_per_setting"] = std::to_string(spec.runs_per_setting);
  c["run_baseline"] = spec.run_baseline ? "1" : "0";
  c["run_coil"] = spec.run_coil ? "1" : "0";
  c["hidden_dim"] = std::to_string(spec.hidden_dim);
  c["measure"] = std::string(to_string(spec.measure));
  c["ga.population_size"] = std::to_string(spec.ga.population_size);
  c["ga.generations"] = std::to_string(spec.ga.generations);
  c["ga.tournaments_per_eval"] = std::to_string(spec.ga.tournaments_per_eval);
  c["ga.crossover_prob"] = format_real(spec.ga.crossover_prob);
  c["ga.mutation_prob_per_gene"] = format_real(spec.ga.mutation_prob_per_gene);
  c["ga.creep_sigma"] = format_real(spec.ga.creep_sigma);
  c["datagen.population_size"] = std::to_string(spec.datagen.population_size);
  c["datagen.generations"] = std::to_string(spec.datagen.generations);
  c["datagen.max_restarts"] = std::to_string(spec.datagen.max_restarts);
  c["datagen.crossover_prob"] = format_real(spec.datagen.crossover_prob);
  c["datagen.mutation_prob_per_gene"] = format_real(spec.datagen.mutation_prob_per_gene);
  c["datagen.creep_sigma"] = format_real(spec.datagen.creep_sigma);
  c["train.epochs"] = std::to_string(spec.train.epochs);
  c["train.learning_rate"] = format_real(spec.train.learning_rate);
  c["train.beta1"] = format_real(spec.train.beta1);
  c["train.beta2"] = format_real(spec.train.beta2);
  c["train.epsilon"] = format_real(spec.train.epsilon);
  c["train.kld_weight"] = format_real(spec.train.kld_weight);
  c["train.kld_reduction"] = to_string(spec.train.kld_reduction);
  c["train.batch_size"] = std::to_string(spec.train.batch_size);
  c["train.restarts"] = std::to_string(spec.train.restarts);
  c["settings"] = std::to_string(spec.settings.size());
  for (std::size_t i = 0; i < spec.settings.size(); ++i) {
    const auto& s = spec.settings[i];
    const std::string p = "setting." + std::to_string(i) + ".";
    c[p + "label"] = s.label;
    c[p + "rb"] = std::to_string(s.problem.rb);
    c[p + "rt"] = std::to_string(s.problem.rt);
    c[p + "rq"] = std::to_string(s.problem.rq);
    c[p + "dr"] = std::to_string(s.problem.dr);
    c[p + "ds"] = std::to_string(s.ds);
    c[p + "maxlv"] = std::to_string(s.maxlv);
  }
  return c;
}

ExperimentSpec spec_from_config(const std::map<std::string, std::string>& c) {
  auto get = [&](const std::string& k) -> const std::string& {
    auto it = c.find(k);
    if (it == c.end()) throw FormatError("experiment config lacks '" + k + "'");
    return it->second;
  };
  using io::parse_real;
  ExperimentSpec spec;
  spec.id = get("id");
  spec.runs_per_setting = to_int(get("runs_per_setting"));
  spec.run_baseline = get("run_baseline") == "1";
  spec.run_coil = get("run_coil") == "1";
  spec.hidden_dim = to_int(get("hidden_dim"));
  spec.measure = constraint_measure_from_string(get("measure"));
  spec.ga.population_size = to_int(get("ga.population_size"));
  spec.ga.generations = to_int(get("ga.generations"));
  spec.ga.tournaments_per_eval = to_int(get("ga.tournaments_per_eval"));
  spec.ga.crossover_prob = parse_real(get("ga.crossover_prob"));
  spec.ga.mutation_prob_per_gene = parse_real(get("ga.mutation_prob_per_gene"));
  spec.ga.creep_sigma = parse_real(get("ga.creep_sigma"));
  spec.datagen.population_size = to_int(get("datagen.population_size"));
  spec.datagen.generations = to_int(get("datagen.generations"));
  spec.datagen.max_restarts = to_int(get("datagen.max_restarts"));
  spec.datagen.crossover_prob = parse_real(get("datagen.crossover_prob"));
  spec.datagen.mutation_prob_per_gene = parse_real(get("datagen.mutation_prob_per_gene"));
  spec.datagen.creep_sigma = parse_real(get("datagen.creep_sigma"));
  spec.train.epochs = to_int(get("train.epochs"));
  spec.train.learning_rate = parse_real(get("train.learning_rate"));
  spec.train.beta1 = parse_real(get("train.beta1"));
  spec.train.beta2 = parse_real(get("train.beta2"));
  spec.train.epsilon = parse_real(get("train.epsilon"));
  spec.train.kld_weight = parse_real(get("train.kld_weight"));
  spec.train.kld_reduction = kld_reduction_from_string(get("train.kld_reduction"));
  spec.train.batch_size = to_int(get("train.batch_size"));
  spec.train.restarts = to_int(get("train.restarts"));
  const int n = to_int(get("settings"));
  for (int i = 0; i < n; ++i) {
    const std::string p = "setting." + std::to_string(i) + ".";
    Setting s;
    s.label = get(p + "label");
    s.problem.rb = to_int(get(p + "rb"));
    s.problem.rt = to_int(get(p + "rt"));
    s.problem.rq = to_int(get(p + "rq"));
    s.problem.dr = to_int(get(p + "dr"));
    s.ds = static_cast<std::size_t>(to_int(get(p + "ds")));
    s.maxlv = to_int(get(p + "maxlv"));
    spec.settings.push_back(s);
  }
  return spec;
}

std::uint64_t run_seed(const Rng& master, std::size_t setting_index, int run) {
  return master.split(setting_index).split(kRunStreamBase + static_cast<std::uint64_t>(run)).seed();
}

SettingArtifacts prepare_artifacts(const ExperimentSpec& spec, std::size_t setting_index,
                                   const Rng& master) {
  const Setting& setting = spec.settings.at(setting_index);
  const Rng srng = master.split(setting_index);
  SettingArtifacts out;
  out.stats.setting = setting.label;
  out.stats.ds = setting.ds;
  out.stats.latent_dim = 2 * setting.maxlv;

  fs::path dir;
  if (!spec.artifact_dir.empty())
    dir = spec.artifact_dir /
          (sanitize(setting.label) + "-" + setting_cache_key(spec, setting, srng));
  const fs::path dataset_path = dir / "dataset.csv";
  const fs::path model_path = dir / "model.vae";
  const fs::path stats_path = dir / "train_stats.meta";

  if (!dir.empty() && fs::exists(dataset_path) && fs::exists(model_path)) {
    out.dataset = io::load_dataset(dataset_path);
    out.model = io::load_model(model_path);
    out.stats.datagen_wall_s = out.dataset.meta.wall_time_s;
    out.stats.datagen_restarts = out.dataset.meta.restarts;
    out.stats.vae_final_loss = out.model.meta.final_loss;
    if (fs::exists(stats_path)) {
      const std::string text = io::read_file(stats_path);
      for (std::size_t pos = 0; pos < text.size();) {
        const std::size_t nl = text.find('\n', pos);
        const std::string line = text.substr(pos, nl - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const std::string val = line.substr(eq + 1);
        if (key == "train_wall_time_s") out.stats.train_wall_s = io::parse_real(val);
        if (key == "restarts") out.stats.train_restarts = to_int(val);
      }
    }
    return out;
  }
  if (!spec.build_artifacts) {
    const fs::path missing = dir.empty() ? fs::path("<no artifact_dir>") : dataset_path;
    throw MissingArtifactError("COIL artifacts for setting '" + setting.label +
                                   "' not found at " + missing.string() +
                                   " and building is disabled",
                               missing.string());
  }

  DatagenConfig datagen = spec.datagen;
  datagen.threads = spec.threads;
  Rng datagen_rng = srng.split(kDatagenStream);
  out.dataset = generate_dataset(setting.problem, setting.ds, datagen, datagen_rng);
  out.stats.datagen_wall_s = out.dataset.meta.wall_time_s;
  out.stats.datagen_restarts = out.dataset.meta.restarts;

  TrainConfig train_config = spec.train;
  train_config.threads = spec.threads;
  const VaeArchitecture arch{2 * setting.problem.rb, spec.hidden_dim, 2 * setting.maxlv};
  Rng train_rng = srng.split(kTrainStream);
  TrainReport report;
  out.model = train(out.dataset.rows, arch, train_config, train_rng, &report);
  out.stats.train_wall_s = report.wall_time_s;
  out.stats.train_restarts = static_cast<int>(report.restarts.size());
  out.stats.vae_final_loss = out.model.meta.final_loss;

  if (!dir.empty()) {
    io::save_dataset(dataset_path, out.dataset);
    io::save_model(model_path, out.model);
    io::write_file(stats_path, "train_wall_time_s=" + io::format_real(report.wall_time_s) +
                                   "\nrestarts=" + std::to_string(report.restarts.size()) + "\n");
  }
  return out;
}

RunRecord execute_run(const ExperimentSpec& spec, const Setting& setting, Algorithm algorithm,
                      int run, std::uint64_t seed, const VaeModel* model,
                      std::vector<TracePoint>* trace) {
  const auto t0 = std::chrono::steady_clock::now();
  const Rng run_rng(seed);
  Rng request_rng = run_rng.split(kRequestStream);
  const RequestSet requests = generate_requests(setting.problem, request_rng);

  OptimizeResult result;
  if (algorithm == Algorithm::kBaseline) {
    Rng ga_rng = run_rng.split(kBaselineStream);
    result = run_baseline(requests, setting.problem, spec.ga, ga_rng, spec.measure);
  } else {
    if (model == nullptr) throw PreconditionError("execute_run: COIL run without a model");
    Rng ga_rng = run_rng.split(kCoilStream);
    result = run_coil(requests, setting.problem, *model, spec.ga, ga_rng, spec.measure);
  }

  RunRecord rec;
  rec.experiment = spec.id;
  rec.setting = setting.label;
  rec.algorithm = algorithm;
  rec.run = run;
  rec.seed = seed;
  rec.objective = result.reported.objective;
  rec.violating_slots = result.reported.constraint.violating_slots;
  rec.peak_excess = result.reported.constraint.peak_excess;
  rec.utilization = result.reported.utilization;
  rec.wall_time_s = seconds_since(t0);
  if (trace != nullptr) *trace = std::move(result.trace);
  return rec;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, Rng& master) {
  spec.validate();
  ExperimentResult out;
  for (std::size_t si = 0; si < spec.settings.size(); ++si) {
    const Setting& setting = spec.settings[si];
    std::optional<SettingArtifacts> artifacts;
    if (spec.run_coil) {
      artifacts = prepare_artifacts(spec, si, master);
      out.build_stats.push_back(artifacts->stats);
    }

    std::vector<Algorithm> algorithms;
    if (spec.run_baseline) algorithms.push_back(Algorithm::kBaseline);
    if (spec.run_coil) algorithms.push_back(Algorithm::kCoil);

    const std::size_t jobs = algorithms.size() * static_cast<std::size_t>(spec.runs_per_setting);
    std::vector<RunRecord> records(jobs);
    std::vector<std::vector<TracePoint>> traces(jobs);
    const VaeModel* model = artifacts ? &artifacts->model : nullptr;
    parallel_for(jobs, spec.threads, [&](std::size_t job) {
      const Algorithm alg = algorithms[job % algorithms.size()];
      const int run = static_cast<int>(job / algorithms.size());
      records[job] = execute_run(spec, setting, alg, run, run_seed(master, si, run), model,
                                 &traces[job]);
    });
    for (std::size_t j = 0; j < jobs; ++j) {
      out.records.push_back(std::move(records[j]));
      out.traces.push_back(std::move(traces[j]));
    }
  }
  out.summary = summarize_records(out.records);
  return out;
}

std::vector<SummaryRow> summarize_records(const std::vector<RunRecord>& records) {
  std::vector<SummaryRow> rows;
  std::vector<std::pair<std::string, Algorithm>> keys;
  for (const auto& r : records) {
    const std::pair<std::string, Algorithm> key{r.setting, r.algorithm};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [setting, alg] : keys) {
    std::vector<double> obj, con;
    double util = 0.0;
    SummaryRow row;
    row.setting = setting;
    row.algorithm = alg;
    for (const auto& r : records) {
      if (r.setting != setting || r.algorithm != alg) continue;
      row.experiment = r.experiment;
      obj.push_back(r.objective);
      con.push_back(r.violating_slots);
      util += r.utilization;
      if (r.violating_slots == 0) ++row.valid_runs;
    }
    row.objective = stats::summarize(obj);
    row.constraint = stats::summarize(con);
    row.avg_utilization = util / static_cast<double>(obj.size());
    rows.push_back(row);
  }
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  using io::format_real;
  std::string out =
      "experiment,setting,algorithm,runs,avg_objective,stdv_objective,min_objective,max_objective,"
      "avg_constraint,stdv_constraint,min_constraint,max_constraint,valid_runs,avg_utilization\n";
  for (const auto& r : rows) {
    out += r.experiment + "," + r.setting + "," + to_string(r.algorithm) + "," +
           std::to_string(r.objective.n) + "," + format_real(r.objective.mean) + "," +
           format_real(r.objective.stdev) + "," + format_real(r.objective.min) + "," +
           format_real(r.objective.max) + "," + format_real(r.constraint.mean) + "," +
           format_real(r.constraint.stdev) + "," + format_real(r.constraint.min) + "," +
           format_real(r.constraint.max) + "," + std::to_string(r.valid_runs) + "," +
           format_real(r.avg_utilization) + "\n";
  }
  return out;
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  std::vector<SummaryRow> rows;
  std::size_t pos = text.find('\n');
  if (pos == std::string_view::npos) throw TruncatedFileError("summary: no header");
  ++pos;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw TruncatedFileError("summary: missing final newline");
    std::vector<std::string> f;
    std::string_view line = text.substr(pos, nl - pos);
    for (std::size_t s = 0;;) {
      const std::size_t c = line.find(',', s);
      f.emplace_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 14) throw FormatError("summary: expected 14 fields");
    SummaryRow r;
    r.experiment = f[0];
    r.setting = f[1];
    r.algorithm = algorithm_from_string(f[2]);
    r.objective.n = r.constraint.n = static_cast<std::size_t>(to_int(f[3]));
    r.objective.mean = io::parse_real(f[4]);
    r.objective.stdev = io::parse_real(f[5]);
    r.objective.min = io::parse_real(f[6]);
    r.objective.max = io::parse_real(f[7]);
    r.constraint.mean = io::parse_real(f[8]);
    r.constraint.stdev = io::parse_real(f[9]);
    r.constraint.min = io::parse_real(f[10]);
    r.constraint.max = io::parse_real(f[11]);
    r.valid_runs = to_int(f[12]);
    r.avg_utilization = io::parse_real(f[13]);
    rows.push_back(r);
    pos = nl + 1;
  }
  return rows;
}

std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  if (rows.empty()) return "(no runs)\n";
  std::vector<std::string> header{""};
  std::vector<std::vector<std::string>> body(8);
  const char* labels[] = {"avg objective (stdv)", "min objective",  "max objective",
                          "avg constraint (stdv)", "min constraint", "max constraint",
                          "valid runs",            "avg utilization"};
  for (int i = 0; i < 8; ++i) body[static_cast<std::size_t>(i)].push_back(labels[i]);
  for (const auto& r : rows) {
    header.push_back(r.setting + " " + to_string(r.algorithm));
    body[0].push_back(fmt2(r.objective.mean) + " (" + fmt2(r.objective.stdev) + ")");
    body[1].push_back(fmt2(r.objective.min));
    body[2].push_back(fmt2(r.objective.max));
    body[3].push_back(fmt2(r.constraint.mean) + " (" + fmt2(r.constraint.stdev) + ")");
    body[4].push_back(fmt2(r.constraint.min));
    body[5].push_back(fmt2(r.constraint.max));
    body[6].push_back(std::to_string(r.valid_runs) + "/" + std::to_string(r.objective.n));
    body[7].push_back(fmt2(r.avg_utilization));
  }
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  };
  widen(header);
  for (const auto& line : body) widen(line);
  auto render = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t i = 0; i < line.size(); ++i) {
      s += line[i] + std::string(width[i] - line[i].size(), ' ');
      s += i + 1 < line.size() ? "  " : "\n";
    }
    return s;
  };
  std::string out = render(header);
  for (const auto& line : body) out += render(line);
  return out;
}

std::string fig6_scatter(const std::vector<RunRecord>& records) {
  std::string out = "experiment,setting,algorithm,run,objective,constraint,valid\n";
  for (const auto& r : records)
    out += r.experiment + "," + r.setting + "," + to_string(r.algorithm) + "," +
           std::to_string(r.run) + "," + std::to_string(r.objective) + "," +
           std::to_string(r.violating_slots) + "," + (r.violating_slots == 0 ? "1" : "0") + "\n";
  return out;
}

std::vector<TimingRow> timing_report(const std::vector<RunRecord>& records,
                                     const std::vector<BuildStats>& build_stats) {
  std::vector<TimingRow> rows;
  auto row_for = [&](const std::string& setting) -> TimingRow& {
    for (auto& r : rows)
      if (r.setting == setting) return r;
    rows.push_back({});
    rows.back().setting = setting;
    return rows.back();
  };
  for (const auto& b : build_stats) {
    TimingRow& r = row_for(b.setting);
    r.ds = b.ds;
    r.latent_dim = b.latent_dim;
    r.datagen_hours = b.datagen_wall_s / 3600.0;
    r.vae_train_minutes = b.train_wall_s / 60.0;
    r.vae_minutes_per_restart =
        b.train_restarts > 0 ? r.vae_train_minutes / b.train_restarts : 0.0;
    r.vae_final_loss = b.vae_final_loss;
  }
  std::map<std::pair<std::string, Algorithm>, std::pair<double, int>> opt;
  for (const auto& rec : records) {
    auto& acc = opt[{rec.setting, rec.algorithm}];
    acc.first += rec.wall_time_s;
    ++acc.second;
    row_for(rec.setting);
  }
  for (auto& r : rows) {
    for (Algorithm a : {Algorithm::kBaseline, Algorithm::kCoil}) {
      auto it = opt.find({r.setting, a});
      if (it == opt.end()) continue;
      const double per100 = it->second.first / 60.0 * 100.0 / it->second.second;
      (a == Algorithm::kBaseline ? r.baseline_minutes_per_100_runs
                                 : r.coil_minutes_per_100_runs) = per100;
    }
  }
  return rows;
}

std::string timing_csv(const std::vector<TimingRow>& rows) {
  using io::format_real;
  std::string out =
      "setting,ds,latent_dim,datagen_hours,vae_train_minutes,vae_minutes_per_restart,"
      "vae_final_loss,baseline_minutes_per_100_runs,coil_minutes_per_100_runs\n";
  for (const auto& r : rows)
    out += r.setting + "," + std::to_string(r.ds) + "," + std::to_string(r.latent_dim) + "," +
           format_real(r.datagen_hours) + "," + format_real(r.vae_train_minutes) + "," +
           format_real(r.vae_minutes_per_restart) + "," + format_real(r.vae_final_loss) + "," +
           format_real(r.baseline_minutes_per_100_runs) + "," +
           format_real(r.coil_minutes_per_100_runs) + "\n";
  return out;
}

std::string build_stats_csv(const std::vector<BuildStats>& stats) {
  using io::format_real;
  std::string out =
      "setting,ds,latent_dim,datagen_wall_s,datagen_restarts,train_wall_s,train_restarts,"
      "vae_final_loss\n";
  for (const auto& b : stats)
    out += b.setting + "," + std::to_string(b.ds) + "," + std::to_string(b.latent_dim) + "," +
           format_real(b.datagen_wall_s) + "," + std::to_string(b.datagen_restarts) + "," +
           format_real(b.train_wall_s) + "," + std::to_string(b.train_restarts) + "," +
           format_real(b.vae_final_loss) + "\n";
  return out;
}

std::vector<BuildStats> parse_build_stats_csv(std::string_view text) {
  std::vector<BuildStats> out;
  std::size_t pos = text.find('\n');
  if (pos == std::string_view::npos) return out;
  ++pos;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw TruncatedFileError("build stats: missing final newline");
    std::vector<std::string> f;
    std::string_view line = text.substr(pos, nl - pos);
    for (std::size_t s = 0;;) {
      const std::size_t c = line.find(',', s);
      f.emplace_back(line.substr(s, c == std::string_view::npos ? std::string_view::npos : c - s));
      if (c == std::string_view::npos) break;
      s = c + 1;
    }
    if (f.size() != 8) throw FormatError("build stats: expected 8 fields");
    BuildStats b;
    b.setting = f[0];
    b.ds = static_cast<std::size_t>(to_int(f[1]));
    b.latent_dim = to_int(f[2]);
    b.datagen_wall_s = io::parse_real(f[3]);
    b.datagen_restarts = to_int(f[4]);
    b.train_wall_s = io::parse_real(f[5]);
    b.train_restarts = to_int(f[6]);
    b.vae_final_loss = io::parse_real(f[7]);
    out.push_back(b);
    pos = nl + 1;
  }
  return out;
}

void write_run_directory(const fs::path& dir, const ExperimentSpec& spec, std::uint64_t seed,
                         const ExperimentResult& result) {
  fs::create_directories(dir);
  io::Manifest manifest;
  manifest.tool_version = std::string(kToolVersion);
  manifest.command = "experiment";
  manifest.seed = seed;
  manifest.created_utc = io::utc_timestamp();
  manifest.config = spec_to_config(spec);

  auto emit = [&](const std::string& name, const std::string& rel, const std::string& text) {
    io::write_file(dir / rel, text);
    manifest.add_artifact(dir, name, rel);
  };
  emit("records", "records.csv", io::run_records_csv(result.records));
  emit("summary", "summary.csv", summary_csv(result.summary));
  emit("fig6", "fig6.csv", fig6_scatter(result.records));
  emit("timing", "timing.csv", timing_csv(timing_report(result.records, result.build_stats)));
  emit("build_stats", "build_stats.csv", build_stats_csv(result.build_stats));
  for (std::size_t i = 0; i < result.records.size() && i < result.traces.size(); ++i) {
    const auto& r = result.records[i];
    const std::string rel = "traces/" + sanitize(r.setting) + "_" + to_string(r.algorithm) +
                            "_run" + std::to_string(r.run) + ".csv";
    io::write_file(dir / rel, io::trace_csv(result.traces[i]));
  }
  // Cached COIL artifacts, when they live under the run directory.
  if (!spec.artifact_dir.empty() && fs::exists(spec.artifact_dir)) {
    for (const auto& entry : fs::recursive_directory_iterator(spec.artifact_dir)) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), dir);
      if (rel.empty() || *rel.begin() == "..") continue;
      manifest.add_artifact(dir, "artifacts/" + fs::relative(entry.path(), spec.artifact_dir).generic_string(),
                            rel.generic_string());
    }
  }
  io::save_manifest(dir / "manifest.txt", manifest);
}

}  // namespace coil
