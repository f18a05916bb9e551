#include "brownopt/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <tuple>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "brownopt/closed_form.hpp"
#include "brownopt/oracle.hpp"
#include "brownopt/parallel.hpp"
#include "brownopt/regret.hpp"
#include "brownopt/rng.hpp"

namespace brownopt {

using nlohmann::json;

namespace {

std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json parse_json(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ConfigError("invalid JSON configuration");
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  return j;
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) {
      if (key == k) { ok = true; break; }
    }
    if (!ok) throw ConfigError("unknown configuration key: " + key);
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("configuration key has wrong type: ") + key);
  }
}

int effective_jobs(int parallelism) {
  if (parallelism > 0) return parallelism;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::uint64_t derive_noise_seed(std::uint64_t path_seed, std::uint64_t noise_index) {
  return rng::key(path_seed, rng::kStreamScratch, 0x4E015E, noise_index);
}

// ---------------------------------------------------------------------------
// ExperimentConfig

void ExperimentConfig::validate() const {
  if (T_grid.empty()) throw ConfigError("T_grid must not be empty");
  std::int64_t prev = 0;
  for (const std::int64_t t : T_grid) {
    if (t <= prev) throw ConfigError("T_grid must be strictly increasing and positive");
    prev = t;
  }
  if (!(sigma2 >= 0.0)) throw ConfigError("sigma2 must be >= 0");
  if (path_seeds < 1) throw ConfigError("path_seeds must be >= 1");
  if (noise_seeds_per_path < 1) throw ConfigError("noise_seeds_per_path must be >= 1");
  if (truth_depth < 1 || truth_depth > 24) throw ConfigError("truth_depth must be in [1, 24]");
  if (delta_override && !(*delta_override > 0.0 && *delta_override < 1.0)) {
    throw ConfigError("delta_override must lie in (0, 1)");
  }
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["T_grid"] = T_grid;
  j["sigma2"] = sigma2;
  j["path_seeds"] = path_seeds;
  j["noise_seeds_per_path"] = noise_seeds_per_path;
  j["truth_depth"] = truth_depth;
  if (delta_override) j["delta_override"] = *delta_override;
  else j["delta_override"] = nullptr;
  j["parallelism"] = parallelism;
  j["output_dir"] = output_dir;
  j["seed_offset"] = seed_offset;
  j["emit_timing"] = emit_timing;
  return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  const json j = parse_json(text);
  reject_unknown_keys(j, {"T_grid", "sigma2", "path_seeds", "noise_seeds_per_path",
                          "truth_depth", "delta_override", "parallelism", "output_dir",
                          "seed_offset", "emit_timing"});
  ExperimentConfig c;
  c.T_grid = get_or(j, "T_grid", c.T_grid);
  c.sigma2 = get_or(j, "sigma2", c.sigma2);
  c.path_seeds = get_or(j, "path_seeds", c.path_seeds);
  c.noise_seeds_per_path = get_or(j, "noise_seeds_per_path", c.noise_seeds_per_path);
  c.truth_depth = get_or(j, "truth_depth", c.truth_depth);
  if (j.contains("delta_override") && !j.at("delta_override").is_null()) {
    c.delta_override = get_or(j, "delta_override", 0.0);
  }
  c.parallelism = get_or(j, "parallelism", c.parallelism);
  c.output_dir = get_or(j, "output_dir", c.output_dir);
  c.seed_offset = get_or(j, "seed_offset", c.seed_offset);
  c.emit_timing = get_or(j, "emit_timing", c.emit_timing);
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::preset(const std::string& name) {
  ExperimentConfig c;
  if (name == "desk" || name.empty()) return c;
  if (name == "paper-scale") {
    c.T_grid = {100000, 250000, 500000, 750000, 1000000, 1250000};
    return c;
  }
  throw ConfigError("unknown preset: " + name + " (expected desk or paper-scale)");
}

// ---------------------------------------------------------------------------
// Experiment

RunRecord simulate_run(std::uint64_t path_seed, std::uint64_t noise_seed, std::int64_t T,
                       double sigma2, std::optional<double> delta_override, int truth_depth,
                       DyadicPoint* recommendation_out) {
  if (T < 1) throw ConfigError("T must be >= 1");
  const auto start = std::chrono::steady_clock::now();

  DyadicPath path = DyadicPath::unit(path_seed);
  NoisyOracle oracle(path, derive_noise_seed(path_seed, noise_seed), sigma2, T);
  ConfidenceParams params = ConfidenceParams::preset(std::max<std::int64_t>(T, 2), sigma2);
  if (delta_override) params.delta = *delta_override;
  const RunTrace trace = run(oracle, params);

  const std::uint64_t rec_key = rng::key(path_seed, rng::kStreamScratch, 0x6EC0, noise_seed);
  const DyadicPoint rec = recommend(trace, rec_key);
  if (recommendation_out) *recommendation_out = rec;

  const int depth = std::max(truth_depth, trace.max_query_depth + 4);
  const RegretReport rep = score(trace, rec, path, depth);

  RunRecord rr;
  rr.T = T;
  rr.path_seed = path_seed;
  rr.noise_seed = noise_seed;
  rr.R_T = rep.cumulative;
  rr.r_T = rep.simple;
  rr.RT_over_sqrtT = rep.cumulative / std::sqrt(static_cast<double>(T));
  rr.epochs = trace.rounds_completed;
  rr.truncated = rep.truncation_flag;
  rr.disc_bound = rep.discretization_bound;
  rr.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return rr;
}

namespace {

std::string runs_csv_text(const ExperimentConfig& config, const std::vector<RunRecord>& runs) {
  std::string out = "# brownopt-runs v1 config=" + hex64(fnv1a(config.to_json())) + "\n";
  out += "T,path_seed,noise_seed,R_T,r_T,RT_over_sqrtT,epochs,truncated,disc_bound,wall_ms\n";
  for (const RunRecord& r : runs) {
    out += std::to_string(r.T) + ',' + std::to_string(r.path_seed) + ',' +
           std::to_string(r.noise_seed) + ',' + fmt_g17(r.R_T) + ',' + fmt_g17(r.r_T) + ',' +
           fmt_g17(r.RT_over_sqrtT) + ',' + std::to_string(r.epochs) + ',' +
           (r.truncated ? "1" : "0") + ',' + fmt_g17(r.disc_bound) + ',' +
           std::to_string(r.wall_ms) + '\n';
  }
  return out;
}

std::string aggregates_csv_text(const ExperimentConfig& config,
                                const std::vector<AggregateRecord>& aggs) {
  std::string out = "# brownopt-aggregates v1 config=" + hex64(fnv1a(config.to_json())) + "\n";
  out +=
      "T,n_runs,mean_R_T,std_R_T,mean_RT_over_sqrtT,std_RT_over_sqrtT,mean_r_T,std_r_T,"
      "mean_rT_sqrtT\n";
  for (const AggregateRecord& a : aggs) {
    out += std::to_string(a.T) + ',' + std::to_string(a.n_runs) + ',' + fmt_g17(a.mean_R_T) +
           ',' + fmt_g17(a.std_R_T) + ',' + fmt_g17(a.mean_RT_over_sqrtT) + ',' +
           fmt_g17(a.std_RT_over_sqrtT) + ',' + fmt_g17(a.mean_r_T) + ',' +
           fmt_g17(a.std_r_T) + ',' + fmt_g17(a.mean_rT_sqrtT) + '\n';
  }
  return out;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

/// Self-contained SVG: mean R_T/sqrt(T) against T (log2 axis) with +-1 std
/// error bars.
std::string plot_svg_text(const std::vector<AggregateRecord>& aggs) {
  const double width = 640, height = 440;
  const double ml = 70, mr = 20, mt = 30, mb = 50;
  double x_lo = std::log2(static_cast<double>(aggs.front().T));
  double x_hi = std::log2(static_cast<double>(aggs.back().T));
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  double y_hi = 0.0;
  for (const AggregateRecord& a : aggs) {
    y_hi = std::max(y_hi, a.mean_RT_over_sqrtT + a.std_RT_over_sqrtT);
  }
  if (y_hi <= 0.0) y_hi = 1.0;
  y_hi *= 1.05;
  const auto X = [&](double t) {
    return ml + (std::log2(t) - x_lo) / (x_hi - x_lo) * (width - ml - mr);
  };
  const auto Y = [&](double v) { return height - mb - v / y_hi * (height - mt - mb); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"440\" "
       "viewBox=\"0 0 640 440\">\n";
  s += "<rect width=\"640\" height=\"440\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"18\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"14\">mean R_T / sqrt(T) vs T (error bars: +-1 std)</text>\n";
  // axes
  s += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(height - mb) + "\" x2=\"" +
       fmt2(width - mr) + "\" y2=\"" + fmt2(height - mb) + "\" stroke=\"black\"/>\n";
  s += "<line x1=\"" + fmt2(ml) + "\" y1=\"" + fmt2(mt) + "\" x2=\"" + fmt2(ml) + "\" y2=\"" +
       fmt2(height - mb) + "\" stroke=\"black\"/>\n";
  // y ticks
  for (int i = 0; i <= 5; ++i) {
    const double v = y_hi * i / 5.0;
    s += "<line x1=\"" + fmt2(ml - 4) + "\" y1=\"" + fmt2(Y(v)) + "\" x2=\"" + fmt2(ml) +
         "\" y2=\"" + fmt2(Y(v)) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt2(ml - 8) + "\" y=\"" + fmt2(Y(v) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt2(v) +
         "</text>\n";
  }
  // x ticks at the T values
  for (const AggregateRecord& a : aggs) {
    const double x = X(static_cast<double>(a.T));
    s += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(height - mb) + "\" x2=\"" + fmt2(x) +
         "\" y2=\"" + fmt2(height - mb + 4) + "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt2(x) + "\" y=\"" + fmt2(height - mb + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         std::to_string(a.T) + "</text>\n";
  }
  s += "<text x=\"" + fmt2((ml + width - mr) / 2) + "\" y=\"" + fmt2(height - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">T</text>\n";
  s += "<text x=\"16\" y=\"" + fmt2((mt + height - mb) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
       "transform=\"rotate(-90 16 " +
       fmt2((mt + height - mb) / 2) + ")\">R_T / sqrt(T)</text>\n";
  // error bars
  for (const AggregateRecord& a : aggs) {
    const double x = X(static_cast<double>(a.T));
    const double ylo = Y(a.mean_RT_over_sqrtT - a.std_RT_over_sqrtT);
    const double yhi = Y(a.mean_RT_over_sqrtT + a.std_RT_over_sqrtT);
    s += "<line x1=\"" + fmt2(x) + "\" y1=\"" + fmt2(ylo) + "\" x2=\"" + fmt2(x) + "\" y2=\"" +
         fmt2(yhi) + "\" stroke=\"steelblue\"/>\n";
    s += "<line x1=\"" + fmt2(x - 4) + "\" y1=\"" + fmt2(ylo) + "\" x2=\"" + fmt2(x + 4) +
         "\" y2=\"" + fmt2(ylo) + "\" stroke=\"steelblue\"/>\n";
    s += "<line x1=\"" + fmt2(x - 4) + "\" y1=\"" + fmt2(yhi) + "\" x2=\"" + fmt2(x + 4) +
         "\" y2=\"" + fmt2(yhi) + "\" stroke=\"steelblue\"/>\n";
  }
  // mean polyline and markers
  std::string pts;
  for (const AggregateRecord& a : aggs) {
    pts += fmt2(X(static_cast<double>(a.T))) + "," + fmt2(Y(a.mean_RT_over_sqrtT)) + " ";
  }
  s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\"/>\n";
  for (const AggregateRecord& a : aggs) {
    s += "<circle cx=\"" + fmt2(X(static_cast<double>(a.T))) + "\" cy=\"" +
         fmt2(Y(a.mean_RT_over_sqrtT)) + "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  struct Task {
    std::int64_t T;
    std::uint64_t path_seed;
    std::uint64_t noise_seed;
  };
  std::vector<Task> tasks;
  tasks.reserve(config.T_grid.size() * static_cast<std::size_t>(config.path_seeds) *
                static_cast<std::size_t>(config.noise_seeds_per_path));
  for (const std::int64_t T : config.T_grid) {
    for (int p = 0; p < config.path_seeds; ++p) {
      for (int j = 0; j < config.noise_seeds_per_path; ++j) {
        tasks.push_back(Task{T, config.seed_offset + static_cast<std::uint64_t>(p),
                             static_cast<std::uint64_t>(j)});
      }
    }
  }

  // Ground truth per path seed, shared read-only across replications.
  std::unordered_map<std::uint64_t, MaxRecord> truths;
  {
    std::vector<std::uint64_t> seeds;
    for (int p = 0; p < config.path_seeds; ++p) {
      seeds.push_back(config.seed_offset + static_cast<std::uint64_t>(p));
    }
    std::vector<MaxRecord> recs(seeds.size());
    parallel_for(static_cast<std::int64_t>(seeds.size()), effective_jobs(config.parallelism),
                 [&](std::int64_t i) {
                   DyadicPath path = DyadicPath::unit(seeds[static_cast<std::size_t>(i)]);
                   recs[static_cast<std::size_t>(i)] = path.grid_max(config.truth_depth);
                 });
    for (std::size_t i = 0; i < seeds.size(); ++i) truths.emplace(seeds[i], recs[i]);
  }

  std::vector<RunRecord> records(tasks.size());
  parallel_for(static_cast<std::int64_t>(tasks.size()), effective_jobs(config.parallelism),
               [&](std::int64_t i) {
    const Task& task = tasks[static_cast<std::size_t>(i)];
    const auto start = std::chrono::steady_clock::now();

    DyadicPath path = DyadicPath::unit(task.path_seed);
    NoisyOracle oracle(path, derive_noise_seed(task.path_seed, task.noise_seed), config.sigma2,
                       task.T);
    ConfidenceParams params =
        ConfidenceParams::preset(std::max<std::int64_t>(task.T, 2), config.sigma2);
    if (config.delta_override) params.delta = *config.delta_override;
    const RunTrace trace = run(oracle, params);
    const DyadicPoint rec = recommend(
        trace, rng::key(task.path_seed, rng::kStreamScratch, 0x6EC0, task.noise_seed));

    RegretReport rep;
    const MaxRecord& truth = truths.at(task.path_seed);
    if (trace.max_query_depth + 4 <= truth.truth_depth) {
      rep = score(trace, rec, path, truth);
    } else {
      rep = score(trace, rec, path, trace.max_query_depth + 4);  // deep run; rescan
    }

    RunRecord rr;
    rr.T = task.T;
    rr.path_seed = task.path_seed;
    rr.noise_seed = task.noise_seed;
    rr.R_T = rep.cumulative;
    rr.r_T = rep.simple;
    rr.RT_over_sqrtT = rep.cumulative / std::sqrt(static_cast<double>(task.T));
    rr.epochs = trace.rounds_completed;
    rr.truncated = rep.truncation_flag;
    rr.disc_bound = rep.discretization_bound;
    if (config.emit_timing) {
      rr.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    }
    records[static_cast<std::size_t>(i)] = rr;
  });

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.T, a.path_seed, a.noise_seed) < std::tie(b.T, b.path_seed, b.noise_seed);
  });

  ExperimentResult result;
  result.runs = std::move(records);

  for (const std::int64_t T : config.T_grid) {
    AggregateRecord agg;
    agg.T = T;
    double s_R = 0, s_Rn = 0, s_r = 0;
    std::vector<double> Rs, Rns, rs;
    for (const RunRecord& r : result.runs) {
      if (r.T != T) continue;
      Rs.push_back(r.R_T);
      Rns.push_back(r.RT_over_sqrtT);
      rs.push_back(r.r_T);
      s_R += r.R_T;
      s_Rn += r.RT_over_sqrtT;
      s_r += r.r_T;
    }
    agg.n_runs = static_cast<std::int64_t>(Rs.size());
    const double n = static_cast<double>(agg.n_runs);
    agg.mean_R_T = s_R / n;
    agg.mean_RT_over_sqrtT = s_Rn / n;
    agg.mean_r_T = s_r / n;
    agg.mean_rT_sqrtT = agg.mean_r_T * std::sqrt(static_cast<double>(T));
    auto sdev = [](const std::vector<double>& xs, double mean) {
      if (xs.size() < 2) return 0.0;
      double acc = 0;
      for (const double x : xs) acc += (x - mean) * (x - mean);
      return std::sqrt(acc / static_cast<double>(xs.size() - 1));
    };
    agg.std_R_T = sdev(Rs, agg.mean_R_T);
    agg.std_RT_over_sqrtT = sdev(Rns, agg.mean_RT_over_sqrtT);
    agg.std_r_T = sdev(rs, agg.mean_r_T);
    result.aggregates.push_back(agg);
  }

  {  // log-log OLS slope of mean R_T against T
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(result.aggregates.size());
    for (const AggregateRecord& a : result.aggregates) {
      const double x = std::log(static_cast<double>(a.T));
      const double y = std::log(a.mean_R_T);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    result.loglog_slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
  }

  const std::filesystem::path dir(config.output_dir);
  result.runs_csv = (dir / "runs.csv").string();
  result.aggregates_csv = (dir / "aggregates.csv").string();
  result.plot_svg = (dir / "regret_plot.svg").string();
  write_file(result.runs_csv, runs_csv_text(config, result.runs));
  write_file(result.aggregates_csv, aggregates_csv_text(config, result.aggregates));
  write_file(result.plot_svg, plot_svg_text(result.aggregates));
  return result;
}

// ---------------------------------------------------------------------------
// VerifyConfig / LowerBoundConfig parsing

void VerifyConfig::validate() const {
  if (!(scale > 0.0)) throw ConfigError("scale must be > 0");
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string VerifyConfig::to_json() const {
  json j;
  if (checks) j["checks"] = *checks;
  else j["checks"] = nullptr;
  j["seed"] = seed;
  j["scale"] = scale;
  j["parallelism"] = parallelism;
  j["output_dir"] = output_dir;
  return j.dump();
}

VerifyConfig VerifyConfig::from_json(const std::string& text) {
  const json j = parse_json(text);
  reject_unknown_keys(j, {"checks", "seed", "scale", "parallelism", "output_dir"});
  VerifyConfig c;
  if (j.contains("checks") && !j.at("checks").is_null()) {
    c.checks = get_or(j, "checks", std::vector<std::string>{});
  }
  c.seed = get_or(j, "seed", c.seed);
  c.scale = get_or(j, "scale", c.scale);
  c.parallelism = get_or(j, "parallelism", c.parallelism);
  c.output_dir = get_or(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

void LowerBoundConfig::validate() const {
  if (T < 2) throw ConfigError("T must be >= 2");
  if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be > 0 for the lower-bound lab");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(schedule_c > 0.0)) throw ConfigError("schedule_c must be > 0");
  if (delta_shift_log2 && (*delta_shift_log2 < 3 || *delta_shift_log2 > 30)) {
    throw ConfigError("delta_shift_log2 must be in [3, 30]");
  }
  if (batches < 1 || seeds_per_batch < 1) throw ConfigError("batches and seeds_per_batch must be >= 1");
  if (algorithms.empty()) throw ConfigError("algorithms must not be empty");
  for (const std::string& a : algorithms) {
    if (a != "confidence_bound" && a != "random_search") {
      throw ConfigError("unknown algorithm: " + a);
    }
  }
  if (parallelism < 0) throw ConfigError("parallelism must be >= 0");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

std::string LowerBoundConfig::to_json() const {
  json j;
  j["T"] = T;
  j["sigma2"] = sigma2;
  j["delta"] = delta;
  j["schedule_c"] = schedule_c;
  if (delta_shift_log2) j["delta_shift_log2"] = *delta_shift_log2;
  else j["delta_shift_log2"] = nullptr;
  j["batches"] = batches;
  j["seeds_per_batch"] = seeds_per_batch;
  j["algorithms"] = algorithms;
  j["truth_depth"] = truth_depth;
  j["grid_depth"] = grid_depth;
  j["random_search_depth"] = random_search_depth;
  j["seed"] = seed;
  j["parallelism"] = parallelism;
  j["output_dir"] = output_dir;
  return j.dump();
}

LowerBoundConfig LowerBoundConfig::from_json(const std::string& text) {
  const json j = parse_json(text);
  reject_unknown_keys(j, {"T", "sigma2", "delta", "schedule_c", "delta_shift_log2", "batches",
                          "seeds_per_batch", "algorithms", "truth_depth", "grid_depth",
                          "random_search_depth", "seed", "parallelism", "output_dir"});
  LowerBoundConfig c;
  c.T = get_or(j, "T", c.T);
  c.sigma2 = get_or(j, "sigma2", c.sigma2);
  c.delta = get_or(j, "delta", c.delta);
  c.schedule_c = get_or(j, "schedule_c", c.schedule_c);
  if (j.contains("delta_shift_log2") && !j.at("delta_shift_log2").is_null()) {
    c.delta_shift_log2 = get_or(j, "delta_shift_log2", 0);
  }
  c.batches = get_or(j, "batches", c.batches);
  c.seeds_per_batch = get_or(j, "seeds_per_batch", c.seeds_per_batch);
  c.algorithms = get_or(j, "algorithms", c.algorithms);
  c.truth_depth = get_or(j, "truth_depth", c.truth_depth);
  c.grid_depth = get_or(j, "grid_depth", c.grid_depth);
  c.random_search_depth = get_or(j, "random_search_depth", c.random_search_depth);
  c.seed = get_or(j, "seed", c.seed);
  c.parallelism = get_or(j, "parallelism", c.parallelism);
  c.output_dir = get_or(j, "output_dir", c.output_dir);
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Lower-bound suite

LowerBoundReport run_lowerbound_suite(const LowerBoundConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);

  LowerBoundReport report;
  report.delta_shift = config.delta_shift_log2
                           ? DyadicPoint(*config.delta_shift_log2, 1)
                           : delta_schedule(config.schedule_c, config.T);

  HypothesisTestOptions options;
  options.delta = config.delta;
  options.truth_depth =
      config.truth_depth > 0 ? config.truth_depth : report.delta_shift.depth + 2;
  options.grid_depth = config.grid_depth > 0 ? config.grid_depth : options.truth_depth;
  options.jobs = effective_jobs(config.parallelism);

  for (const std::string& name : config.algorithms) {
    const AlgorithmFn algo = name == "confidence_bound"
                                 ? algorithm_confidence_bound()
                                 : algorithm_random_search(config.random_search_depth);
    int ok = 0;
    for (int b = 0; b < config.batches; ++b) {
      std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.seeds_per_batch));
      for (int i = 0; i < config.seeds_per_batch; ++i) {
        seeds[static_cast<std::size_t>(i)] = rng::key(
            config.seed, rng::kStreamScratch, fnv1a(name) + static_cast<std::uint64_t>(b),
            static_cast<std::uint64_t>(i));
      }
      LowerBoundRow row;
      row.algorithm = name;
      row.batch = b;
      row.summary = hypothesis_test_regret(algo, report.delta_shift, config.sigma2, config.T,
                                           seeds, options);
      if (row.summary.floor_respected) ++ok;
      report.rows.push_back(row);
    }
    const double frac = static_cast<double>(ok) / static_cast<double>(config.batches);
    report.fraction_ok.emplace_back(name, frac);
    if (frac < 0.95) report.all_ok = false;
  }

  std::string csv = "# brownopt-lowerbound v1 config=" + hex64(fnv1a(config.to_json())) + "\n";
  csv += "algorithm,batch,n_seeds,n_certified,mean_regret_certified,mean_mi_certified,floor,"
         "floor_respected\n";
  for (const LowerBoundRow& r : report.rows) {
    csv += r.algorithm + ',' + std::to_string(r.batch) + ',' +
           std::to_string(r.summary.n_seeds) + ',' + std::to_string(r.summary.n_certified) +
           ',' + fmt_g17(r.summary.mean_regret_certified) + ',' +
           fmt_g17(r.summary.mean_mi_certified) + ',' + fmt_g17(r.summary.floor) + ',' +
           (r.summary.floor_respected ? "1" : "0") + '\n';
  }
  const std::filesystem::path dir(config.output_dir);
  report.report_csv = (dir / "lowerbound_report.csv").string();
  write_file(report.report_csv, csv);

  json j;
  j["delta_shift"] = report.delta_shift.str();
  j["all_ok"] = report.all_ok;
  json fr = json::object();
  for (const auto& [name, frac] : report.fraction_ok) fr[name] = frac;
  j["fraction_ok"] = fr;
  report.report_json = (dir / "lowerbound_report.json").string();
  write_file(report.report_json, j.dump(2) + "\n");
  return report;
}

}  // namespace brownopt
