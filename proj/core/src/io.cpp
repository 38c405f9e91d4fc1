#include "coil/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include "coil/errors.hpp"

namespace coil::io {

namespace {

constexpr std::string_view kModelMagic = "# coil-vae-model";
constexpr int kModelFormatVersion = 1;
constexpr std::string_view kDatasetFormat = "coil-dataset-v1";
constexpr std::string_view kManifestFormat = "coil-manifest-v1";
constexpr std::string_view kRunRecordsHeader =
    "experiment,setting,algorithm,run,seed,objective,violating_slots,peak_excess,utilization,"
    "wall_time_s";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Splits LF-terminated text into lines. A non-empty final fragment without
/// its newline means the file was cut short.
std::vector<std::string_view> lines_of(std::string_view text, const std::string& what) {
  if (text.empty()) throw TruncatedFileError(what + ": empty file");
  if (text.back() != '\n') throw TruncatedFileError(what + ": missing final newline");
  text.remove_suffix(1);
  auto lines = split(text, '\n');
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return lines;
}

long long parse_int(std::string_view s, const std::string& what) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw FormatError(what + ": not an integer: '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_u64(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw FormatError(what + ": not an unsigned integer: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> csv_fields(std::string_view line, std::size_t expected,
                                         const std::string& what) {
  auto fields = split(line, ',');
  if (fields.size() != expected)
    throw FormatError(what + ": expected " + std::to_string(expected) + " fields, got " +
                      std::to_string(fields.size()) + " in '" + std::string(line) + "'");
  return fields;
}

void expect_header(std::string_view got, std::string_view want, const std::string& what) {
  if (got != want)
    throw SchemaVersionError(what + ": unexpected header '" + std::string(got) +
                             "', expected '" + std::string(want) + "'");
}

std::map<std::string, std::string> parse_key_values(std::string_view text,
                                                    const std::string& what) {
  std::map<std::string, std::string> out;
  for (auto line : lines_of(text, what)) {
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw FormatError(what + ": line without '=': '" + std::string(line) + "'");
    out.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  return out;
}

const std::string& require_key(const std::map<std::string, std::string>& kv,
                               const std::string& key, const std::string& what) {
  auto it = kv.find(key);
  if (it == kv.end()) throw FormatError(what + ": missing key '" + key + "'");
  return it->second;
}

std::string dataset_meta_path(const fs::path& path) { return path.string() + ".meta"; }

// Model text helpers.
struct LineCursor {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;

  std::string_view next(const char* expecting) {
    if (pos >= lines.size())
      throw TruncatedFileError(std::string("model file ends while reading ") + expecting);
    return lines[pos++];
  }
  // "key value" line.
  std::string_view value(std::string_view key) {
    const auto line = next(std::string(key).c_str());
    const auto sp = line.find(' ');
    if (sp == std::string_view::npos || line.substr(0, sp) != key)
      throw FormatError("model file: expected '" + std::string(key) + "', got '" +
                        std::string(line) + "'");
    return line.substr(sp + 1);
  }
};

std::vector<double> parse_reals_line(std::string_view line, std::string_view tag,
                                     std::size_t expected) {
  auto parts = split(line, ' ');
  if (parts.empty() || parts.front() != tag)
    throw FormatError("model file: expected '" + std::string(tag) + "' row");
  if (parts.size() - 1 != expected)
    throw TruncatedFileError("model file: row has " + std::to_string(parts.size() - 1) +
                             " values, expected " + std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (std::size_t i = 1; i < parts.size(); ++i) out.push_back(parse_real(parts[i]));
  return out;
}

const std::array<const char*, 4> kLayerNames = {"enc_hidden", "enc_head", "dec_hidden",
                                                "dec_out"};

}  // namespace

std::string format_real(double v) {
  if (!std::isfinite(v)) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw FormatError("format_real failed");
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw FormatError("not a real number: '" + std::string(s) + "'");
  return v;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw IoError("sha256 computation failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_file(path)); }

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void save_requests(const fs::path& path, const RequestSet& requests) {
  std::string out = "duration_min\n";
  for (int d : requests.durations) out += std::to_string(d) + "\n";
  write_file(path, out);
}

RequestSet load_requests(const fs::path& path) {
  const std::string text = read_file(path);
  const auto lines = lines_of(text, path.string());
  expect_header(lines.front(), "duration_min", path.string());
  RequestSet out;
  for (std::size_t i = 1; i < lines.size(); ++i)
    out.durations.push_back(static_cast<int>(parse_int(lines[i], path.string())));
  return out;
}

void save_schedule(const fs::path& path, const FleetSchedule& schedule) {
  std::string out = "robot,start_slot,run_slots\n";
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& s = schedule.entries[i];
    out += std::to_string(i) + "," + std::to_string(s.start_slot) + "," +
           std::to_string(s.run_slots) + "\n";
  }
  write_file(path, out);
}

FleetSchedule load_schedule(const fs::path& path) {
  const std::string text = read_file(path);
  const auto lines = lines_of(text, path.string());
  expect_header(lines.front(), "robot,start_slot,run_slots", path.string());
  FleetSchedule out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv_fields(lines[i], 3, path.string());
    if (parse_int(f[0], path.string()) != static_cast<long long>(i - 1))
      throw FormatError(path.string() + ": robot indices must be 0..rb-1 in order");
    out.entries.push_back({static_cast<int>(parse_int(f[1], path.string())),
                           static_cast<int>(parse_int(f[2], path.string()))});
  }
  if (!out.in_bounds()) throw BoundsError(path.string() + ": slot value outside [0, 66]");
  return out;
}

std::string allocation_csv(const RequestSet& requests, const AllocationResult& result) {
  std::string out = "request,assigned_robot,duration_min\n";
  for (std::size_t j = 0; j < requests.size(); ++j)
    out += std::to_string(j) + "," + std::to_string(result.assignment.at(j)) + "," +
           std::to_string(requests.durations[j]) + "\n";
  return out;
}

std::string evaluations_csv(const std::vector<EvaluationRow>& rows) {
  std::string out = "run,objective,violating_slots,peak_excess,mode\n";
  for (const auto& r : rows)
    out += std::to_string(r.run) + "," + std::to_string(r.evaluation.objective) + "," +
           std::to_string(r.evaluation.constraint.violating_slots) + "," +
           std::to_string(r.evaluation.constraint.peak_excess) + "," +
           std::string(to_string(r.evaluation.mode)) + "\n";
  return out;
}

std::vector<EvaluationRow> parse_evaluations_csv(std::string_view text) {
  const auto lines = lines_of(text, "evaluations");
  expect_header(lines.front(), "run,objective,violating_slots,peak_excess,mode", "evaluations");
  std::vector<EvaluationRow> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv_fields(lines[i], 5, "evaluations");
    EvaluationRow row;
    row.run = static_cast<int>(parse_int(f[0], "evaluations"));
    row.evaluation.objective = static_cast<int>(parse_int(f[1], "evaluations"));
    row.evaluation.constraint.violating_slots = static_cast<int>(parse_int(f[2], "evaluations"));
    row.evaluation.constraint.peak_excess = static_cast<int>(parse_int(f[3], "evaluations"));
    row.evaluation.mode = eval_mode_from_string(f[4]);
    out.push_back(row);
  }
  return out;
}

std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string out = "generation,best_objective,best_constraint,utilization\n";
  for (const auto& t : trace)
    out += std::to_string(t.generation) + "," + format_real(t.best_objective) + "," +
           format_real(t.best_constraint) + "," + format_real(t.utilization) + "\n";
  return out;
}

std::vector<TracePoint> parse_trace_csv(std::string_view text) {
  const auto lines = lines_of(text, "trace");
  expect_header(lines.front(), "generation,best_objective,best_constraint,utilization", "trace");
  std::vector<TracePoint> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv_fields(lines[i], 4, "trace");
    out.push_back({static_cast<int>(parse_int(f[0], "trace")), parse_real(f[1]),
                   parse_real(f[2]), parse_real(f[3])});
  }
  return out;
}

void save_dataset(const fs::path& path, const Dataset& dataset) {
  const std::size_t dim = dataset.dim() > 0 ? dataset.dim() : 2 * static_cast<std::size_t>(dataset.meta.rb);
  std::string csv;
  for (std::size_t g = 0; g < dim; ++g) csv += (g ? ",g" : "g") + std::to_string(g);
  csv += "\n";
  for (const auto& row : dataset.rows) {
    if (row.size() != dim) throw ShapeError("save_dataset: ragged rows");
    for (std::size_t g = 0; g < dim; ++g) {
      if (g) csv += ",";
      csv += format_real(row[g]);
    }
    csv += "\n";
  }
  write_file(path, csv);

  const auto& m = dataset.meta;
  std::string meta;
  meta += "format=" + std::string(kDatasetFormat) + "\n";
  meta += "rb=" + std::to_string(m.rb) + "\n";
  meta += "rt=" + std::to_string(m.rt) + "\n";
  meta += "ds=" + std::to_string(dataset.size()) + "\n";
  meta += "dim=" + std::to_string(dim) + "\n";
  meta += "seed=" + std::to_string(m.seed) + "\n";
  meta += "restarts=" + std::to_string(m.restarts) + "\n";
  meta += "evaluations=" + std::to_string(m.evaluations) + "\n";
  meta += "mining_wall_time_s=" + format_real(m.wall_time_s) + "\n";
  meta += "sha256=" + sha256_hex(csv) + "\n";
  write_file(dataset_meta_path(path), meta);
}

Dataset load_dataset(const fs::path& path) {
  const std::string what = path.string();
  const auto kv = parse_key_values(read_file(dataset_meta_path(path)), what + ".meta");
  if (require_key(kv, "format", what) != kDatasetFormat)
    throw SchemaVersionError(what + ": unsupported dataset format '" + kv.at("format") + "'");
  const auto rows_expected = static_cast<std::size_t>(parse_int(require_key(kv, "ds", what), what));
  const auto dim = static_cast<std::size_t>(parse_int(require_key(kv, "dim", what), what));

  const std::string csv = read_file(path);
  const auto lines = lines_of(csv, what);
  if (lines.size() - 1 < rows_expected)
    throw TruncatedFileError(what + ": " + std::to_string(lines.size() - 1) + " rows, meta says " +
                             std::to_string(rows_expected));
  if (sha256_hex(csv) != require_key(kv, "sha256", what))
    throw HashMismatchError(what + ": content hash does not match its metadata");

  Dataset out;
  out.meta.rb = static_cast<int>(parse_int(require_key(kv, "rb", what), what));
  out.meta.rt = static_cast<int>(parse_int(require_key(kv, "rt", what), what));
  out.meta.seed = parse_u64(require_key(kv, "seed", what), what);
  out.meta.restarts = static_cast<int>(parse_int(require_key(kv, "restarts", what), what));
  out.meta.evaluations = static_cast<long>(parse_int(require_key(kv, "evaluations", what), what));
  out.meta.wall_time_s = parse_real(require_key(kv, "mining_wall_time_s", what));
  std::string header;
  for (std::size_t g = 0; g < dim; ++g) header += (g ? ",g" : "g") + std::to_string(g);
  expect_header(lines.front(), header, what);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv_fields(lines[i], dim, what);
    std::vector<double> row;
    row.reserve(dim);
    for (auto v : f) row.push_back(parse_real(v));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string model_text(const VaeModel& model) {
  std::string out;
  out += std::string(kModelMagic) + "\n";
  out += "format_version " + std::to_string(kModelFormatVersion) + "\n";
  out += "input_dim " + std::to_string(model.arch.input_dim) + "\n";
  out += "hidden_dim " + std::to_string(model.arch.hidden_dim) + "\n";
  out += "latent_dim " + std::to_string(model.arch.latent_dim) + "\n";
  out += "hidden_activation relu\n";
  out += "output_activation sigmoid\n";
  out += "epochs " + std::to_string(model.meta.epochs) + "\n";
  out += "learning_rate " + format_real(model.meta.learning_rate) + "\n";
  out += "initial_loss " + format_real(model.meta.initial_loss) + "\n";
  out += "final_loss " + format_real(model.meta.final_loss) + "\n";
  out += "seed " + std::to_string(model.meta.seed) + "\n";
  out += "restart_index " + std::to_string(model.meta.restart_index) + "\n";
  const auto layers = model.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const DenseLayer& l = *layers[i];
    out += std::string("layer ") + kLayerNames[i] + " " + std::to_string(l.out_dim()) + " " +
           std::to_string(l.in_dim()) + "\n";
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      out += "w";
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) out += " " + format_real(l.weight(r, c));
      out += "\n";
    }
    out += "b";
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) out += " " + format_real(l.bias(r));
    out += "\n";
  }
  out += "end\n";
  return out;
}

VaeModel parse_model(std::string_view text) {
  if (text.substr(0, kModelMagic.size()) != kModelMagic)
    throw FormatError("not a coil VAE model file");
  LineCursor cur;
  try {
    cur.lines = lines_of(text, "model file");
  } catch (const TruncatedFileError&) {
    throw TruncatedFileError("model file: truncated (missing final newline)");
  }
  cur.next("magic");
  const auto version = parse_int(cur.value("format_version"), "model file");
  if (version != kModelFormatVersion)
    throw SchemaVersionError("model file: format_version " + std::to_string(version) +
                             " not supported (expected " + std::to_string(kModelFormatVersion) + ")");
  VaeArchitecture arch;
  arch.input_dim = static_cast<int>(parse_int(cur.value("input_dim"), "model file"));
  arch.hidden_dim = static_cast<int>(parse_int(cur.value("hidden_dim"), "model file"));
  arch.latent_dim = static_cast<int>(parse_int(cur.value("latent_dim"), "model file"));
  if (cur.value("hidden_activation") != "relu" || cur.value("output_activation") != "sigmoid")
    throw SchemaVersionError("model file: unsupported activation");
  VaeModel model = zero_model(arch);
  model.meta.epochs = static_cast<int>(parse_int(cur.value("epochs"), "model file"));
  model.meta.learning_rate = parse_real(cur.value("learning_rate"));
  model.meta.initial_loss = parse_real(cur.value("initial_loss"));
  model.meta.final_loss = parse_real(cur.value("final_loss"));
  model.meta.seed = parse_u64(cur.value("seed"), "model file");
  model.meta.restart_index = static_cast<int>(parse_int(cur.value("restart_index"), "model file"));

  auto layers = model.layers();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    DenseLayer& l = *layers[i];
    const std::string expect = std::string(kLayerNames[i]) + " " + std::to_string(l.out_dim()) +
                               " " + std::to_string(l.in_dim());
    if (cur.value("layer") != expect)
      throw FormatError("model file: expected layer '" + expect + "'");
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      const auto vals = parse_reals_line(cur.next("weights"), "w", static_cast<std::size_t>(l.in_dim()));
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = vals[static_cast<std::size_t>(c)];
    }
    const auto bias = parse_reals_line(cur.next("bias"), "b", static_cast<std::size_t>(l.out_dim()));
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias(r) = bias[static_cast<std::size_t>(r)];
  }
  if (cur.next("end marker") != "end") throw FormatError("model file: missing end marker");
  return model;
}

void save_model(const fs::path& path, const VaeModel& model) { write_file(path, model_text(model)); }

VaeModel load_model(const fs::path& path) { return parse_model(read_file(path)); }

std::string run_records_csv(const std::vector<RunRecord>& records) {
  std::string out = std::string(kRunRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += r.experiment + "," + r.setting + "," + to_string(r.algorithm) + "," +
           std::to_string(r.run) + "," + std::to_string(r.seed) + "," +
           std::to_string(r.objective) + "," + std::to_string(r.violating_slots) + "," +
           std::to_string(r.peak_excess) + "," + format_real(r.utilization) + "," +
           format_real(r.wall_time_s) + "\n";
  }
  return out;
}

std::vector<RunRecord> parse_run_records_csv(std::string_view text) {
  const auto lines = lines_of(text, "run records");
  expect_header(lines.front(), kRunRecordsHeader, "run records");
  std::vector<RunRecord> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = csv_fields(lines[i], 10, "run records");
    RunRecord r;
    r.experiment = std::string(f[0]);
    r.setting = std::string(f[1]);
    r.algorithm = algorithm_from_string(std::string(f[2]));
    r.run = static_cast<int>(parse_int(f[3], "run records"));
    r.seed = parse_u64(f[4], "run records");
    r.objective = static_cast<int>(parse_int(f[5], "run records"));
    r.violating_slots = static_cast<int>(parse_int(f[6], "run records"));
    r.peak_excess = static_cast<int>(parse_int(f[7], "run records"));
    r.utilization = parse_real(f[8]);
    r.wall_time_s = parse_real(f[9]);
    out.push_back(std::move(r));
  }
  return out;
}

void Manifest::add_artifact(const fs::path& base_dir, const std::string& name,
                            const std::string& path) {
  ArtifactEntry entry{name, path, sha256_file(base_dir / path)};
  for (auto& a : artifacts) {
    if (a.name == name) {
      a = entry;
      return;
    }
  }
  artifacts.push_back(std::move(entry));
}

const ArtifactEntry* Manifest::find(const std::string& name) const {
  for (const auto& a : artifacts)
    if (a.name == name) return &a;
  return nullptr;
}

std::string manifest_text(const Manifest& m) {
  std::string out;
  out += "format=" + std::string(kManifestFormat) + "\n";
  out += "tool_version=" + m.tool_version + "\n";
  out += "command=" + m.command + "\n";
  out += "seed=" + std::to_string(m.seed) + "\n";
  out += "created_utc=" + m.created_utc + "\n";
  for (const auto& [k, v] : m.config) out += "config." + k + "=" + v + "\n";
  for (const auto& a : m.artifacts) {
    out += "artifact." + a.name + ".path=" + a.path + "\n";
    out += "artifact." + a.name + ".sha256=" + a.sha256 + "\n";
  }
  return out;
}

Manifest parse_manifest(std::string_view text) {
  const auto kv = parse_key_values(text, "manifest");
  if (require_key(kv, "format", "manifest") != kManifestFormat)
    throw SchemaVersionError("manifest: unsupported format '" + kv.at("format") + "'");
  Manifest m;
  m.tool_version = require_key(kv, "tool_version", "manifest");
  m.command = require_key(kv, "command", "manifest");
  m.seed = parse_u64(require_key(kv, "seed", "manifest"), "manifest");
  m.created_utc = require_key(kv, "created_utc", "manifest");
  std::map<std::string, ArtifactEntry> arts;
  std::vector<std::string> order;
  for (const auto& [k, v] : kv) {
    if (k.rfind("config.", 0) == 0) {
      m.config.emplace(k.substr(7), v);
    } else if (k.rfind("artifact.", 0) == 0) {
      const auto dot = k.rfind('.');
      const std::string name = k.substr(9, dot - 9);
      const std::string field = k.substr(dot + 1);
      if (!arts.count(name)) order.push_back(name);
      arts[name].name = name;
      if (field == "path")
        arts[name].path = v;
      else if (field == "sha256")
        arts[name].sha256 = v;
      else
        throw FormatError("manifest: unknown artifact field '" + k + "'");
    }
  }
  for (const auto& name : order) {
    const auto& a = arts[name];
    if (a.path.empty() || a.sha256.empty())
      throw FormatError("manifest: artifact '" + name + "' lacks path or sha256");
    m.artifacts.push_back(a);
  }
  return m;
}

void save_manifest(const fs::path& path, const Manifest& manifest) {
  write_file(path, manifest_text(manifest));
}

void verify_manifest(const Manifest& manifest, const fs::path& base_dir) {
  for (const auto& a : manifest.artifacts) {
    const fs::path full = base_dir / a.path;
    if (!fs::exists(full))
      throw MissingArtifactError("manifest artifact '" + a.name + "' missing: " + full.string(),
                                 full.string());
    if (sha256_file(full) != a.sha256)
      throw HashMismatchError("manifest artifact '" + a.name + "' hash mismatch: " + full.string());
  }
}

Manifest load_manifest(const fs::path& path) {
  Manifest m = parse_manifest(read_file(path));
  verify_manifest(m, path.parent_path());
  return m;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace coil::io
