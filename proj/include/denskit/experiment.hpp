#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "denskit/bespoke.hpp"
#include "denskit/estimators.hpp"
#include "denskit/geodesic.hpp"
#include "denskit/gp_random.hpp"
#include "denskit/hierarchy.hpp"
#include "denskit/inpca.hpp"
#include "denskit/io.hpp"
#include "denskit/provider_http.hpp"
#include "denskit/sampling.hpp"

namespace denskit {

struct TargetSpec {
  enum class Kind { gaussian, uniform, gp_random, from_file };
  Kind kind = Kind::gaussian;
  double mean = 50.0;
  double sigma = 3.0;
  double lo = 45.0;
  double hi = 55.0;
  GpConfig gp;
  std::string file;

  bool operator==(const TargetSpec&) const = default;
};

struct EstimatorEntry {
  enum class Kind { kde, histogram, provider };
  Kind kind = Kind::kde;
  double shape = 2.0;
  BandwidthSchedule schedule;
  double alpha = 1.0;
  ProviderSpec provider;
  std::string label;

  bool operator==(const EstimatorEntry&) const = default;
};

struct EmbeddingSpec {
  PairwiseMetric metric = PairwiseMetric::hellinger_squared;
  bool joint_guides = true;
  int dimensions = 2;
  int geodesic_points = 256;
  int submanifold_points = 64;

  bool operator==(const EmbeddingSpec&) const = default;
};

struct ExperimentConfig {
  int num_digits = 2;
  TargetSpec target;
  std::uint64_t sample_seed = 7;
  int sample_count = 200;
  std::vector<int> context_lengths;  // empty means 0..sample_count
  std::vector<EstimatorEntry> estimators;
  EmbeddingSpec embedding;
  bool fit_bespoke = false;
  std::string output_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;

  std::vector<int> effective_context_lengths() const {
    if (!context_lengths.empty()) return context_lengths;
    std::vector<int> ns(sample_count + 1);
    for (int i = 0; i <= sample_count; ++i) ns[i] = i;
    return ns;
  }
};

// --- config JSON round trip -------------------------------------------------

inline nlohmann::json to_json(const TargetSpec& t) {
  nlohmann::json j;
  switch (t.kind) {
    case TargetSpec::Kind::gaussian:
      j["kind"] = "gaussian";
      j["mean"] = t.mean;
      j["sigma"] = t.sigma;
      break;
    case TargetSpec::Kind::uniform:
      j["kind"] = "uniform";
      j["lo"] = t.lo;
      j["hi"] = t.hi;
      break;
    case TargetSpec::Kind::gp_random:
      j["kind"] = "gp-random";
      j["correlation_length"] = t.gp.correlation_length;
      j["resolution"] = t.gp.resolution;
      j["seed"] = t.gp.seed;
      j["jitter"] = t.gp.jitter;
      break;
    case TargetSpec::Kind::from_file:
      j["kind"] = "from-file";
      j["file"] = t.file;
      break;
  }
  return j;
}

inline TargetSpec target_from_json(const nlohmann::json& j) {
  TargetSpec t;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    t.kind = TargetSpec::Kind::gaussian;
    t.mean = j.value("mean", t.mean);
    t.sigma = j.value("sigma", t.sigma);
  } else if (kind == "uniform") {
    t.kind = TargetSpec::Kind::uniform;
    t.lo = j.value("lo", t.lo);
    t.hi = j.value("hi", t.hi);
  } else if (kind == "gp-random") {
    t.kind = TargetSpec::Kind::gp_random;
    t.gp.correlation_length = j.value("correlation_length", t.gp.correlation_length);
    t.gp.resolution = j.value("resolution", t.gp.resolution);
    t.gp.seed = j.value("seed", t.gp.seed);
    t.gp.jitter = j.value("jitter", t.gp.jitter);
  } else if (kind == "from-file") {
    t.kind = TargetSpec::Kind::from_file;
    t.file = j.at("file").get<std::string>();
  } else {
    throw ConfigError("config: unknown target kind " + kind);
  }
  return t;
}

inline nlohmann::json to_json(const BandwidthSchedule& s) {
  nlohmann::json j;
  switch (s.kind) {
    case BandwidthSchedule::Kind::power_law:
      j["variant"] = "power-law";
      j["coefficient"] = s.coefficient;
      j["exponent"] = s.exponent;
      break;
    case BandwidthSchedule::Kind::silverman:
      j["variant"] = "silverman";
      break;
    case BandwidthSchedule::Kind::constant:
      j["variant"] = "constant";
      j["h"] = s.constant_h;
      break;
  }
  return j;
}

inline BandwidthSchedule schedule_from_json(const nlohmann::json& j) {
  std::string variant = j.at("variant").get<std::string>();
  if (variant == "power-law")
    return BandwidthSchedule::power_law(j.value("coefficient", 1.0), j.value("exponent", -0.2));
  if (variant == "silverman") return BandwidthSchedule::silverman();
  if (variant == "constant") return BandwidthSchedule::constant(j.value("h", 1.0));
  throw ConfigError("config: unknown schedule variant " + variant);
}

inline nlohmann::json to_json(const ProviderSpec& p) {
  nlohmann::json j;
  switch (p.kind) {
    case ProviderSpec::Kind::http:
      j["kind"] = "http";
      j["endpoint"] = p.endpoint;
      break;
    case ProviderSpec::Kind::replay:
      j["kind"] = "replay";
      j["path"] = p.replay_path;
      break;
    case ProviderSpec::Kind::mock:
      j["kind"] = "mock";
      j["preset"] = p.mock;
      break;
  }
  j["timeout_seconds"] = p.timeout_seconds;
  j["retries"] = p.retries;
  return j;
}

inline ProviderSpec provider_from_json(const nlohmann::json& j) {
  ProviderSpec p;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "http") {
    p.kind = ProviderSpec::Kind::http;
    p.endpoint = j.at("endpoint").get<std::string>();
  } else if (kind == "replay") {
    p.kind = ProviderSpec::Kind::replay;
    p.replay_path = j.at("path").get<std::string>();
  } else if (kind == "mock") {
    p.kind = ProviderSpec::Kind::mock;
    p.mock = j.at("preset").get<std::string>();
  } else {
    throw ConfigError("config: unknown provider kind " + kind);
  }
  p.timeout_seconds = j.value("timeout_seconds", 30.0);
  p.retries = j.value("retries", 3);
  return p;
}

inline nlohmann::json to_json(const EstimatorEntry& e) {
  nlohmann::json j;
  switch (e.kind) {
    case EstimatorEntry::Kind::kde:
      j["kind"] = "kde";
      j["shape"] = e.shape;
      j["schedule"] = to_json(e.schedule);
      break;
    case EstimatorEntry::Kind::histogram:
      j["kind"] = "histogram";
      j["alpha"] = e.alpha;
      break;
    case EstimatorEntry::Kind::provider:
      j["kind"] = "provider";
      j["provider"] = to_json(e.provider);
      break;
  }
  j["label"] = e.label;
  return j;
}

inline EstimatorEntry estimator_from_json(const nlohmann::json& j) {
  EstimatorEntry e;
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "kde") {
    e.kind = EstimatorEntry::Kind::kde;
    e.shape = j.value("shape", 2.0);
    if (j.contains("schedule")) e.schedule = schedule_from_json(j["schedule"]);
  } else if (kind == "histogram") {
    e.kind = EstimatorEntry::Kind::histogram;
    e.alpha = j.value("alpha", 1.0);
  } else if (kind == "provider") {
    e.kind = EstimatorEntry::Kind::provider;
    e.provider = provider_from_json(j.at("provider"));
  } else {
    throw ConfigError("config: unknown estimator kind " + kind);
  }
  e.label = j.value("label", std::string());
  return e;
}

inline nlohmann::json to_json(const EmbeddingSpec& s) {
  nlohmann::json j;
  j["metric"] =
      (s.metric == PairwiseMetric::hellinger_squared) ? "hellinger-squared" : "l2-squared";
  j["joint_guides"] = s.joint_guides;
  j["dimensions"] = s.dimensions;
  j["geodesic_points"] = s.geodesic_points;
  j["submanifold_points"] = s.submanifold_points;
  return j;
}

inline EmbeddingSpec embedding_from_json(const nlohmann::json& j) {
  EmbeddingSpec s;
  std::string metric = j.value("metric", std::string("hellinger-squared"));
  if (metric == "hellinger-squared")
    s.metric = PairwiseMetric::hellinger_squared;
  else if (metric == "l2-squared")
    s.metric = PairwiseMetric::l2_squared;
  else
    throw ConfigError("config: unknown embedding metric " + metric);
  s.joint_guides = j.value("joint_guides", true);
  s.dimensions = j.value("dimensions", 2);
  s.geodesic_points = j.value("geodesic_points", 256);
  s.submanifold_points = j.value("submanifold_points", 64);
  return s;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["num_digits"] = c.num_digits;
  j["target"] = to_json(c.target);
  j["sample_seed"] = c.sample_seed;
  j["sample_count"] = c.sample_count;
  j["context_lengths"] = c.context_lengths;
  nlohmann::json ests = nlohmann::json::array();
  for (const auto& e : c.estimators) ests.push_back(to_json(e));
  j["estimators"] = ests;
  j["embedding"] = to_json(c.embedding);
  j["fit_bespoke"] = c.fit_bespoke;
  j["output_dir"] = c.output_dir;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.num_digits = j.value("num_digits", 2);
  if (j.contains("target")) c.target = target_from_json(j["target"]);
  c.sample_seed = j.value("sample_seed", std::uint64_t{7});
  c.sample_count = j.value("sample_count", 200);
  c.context_lengths = j.value("context_lengths", std::vector<int>{});
  if (j.contains("estimators"))
    for (const auto& e : j["estimators"]) c.estimators.push_back(estimator_from_json(e));
  if (j.contains("embedding")) c.embedding = embedding_from_json(j["embedding"]);
  c.fit_bespoke = j.value("fit_bespoke", false);
  c.output_dir = j.value("output_dir", std::string("out"));
  return c;
}

// --- presets ----------------------------------------------------------------

// Target parameters behind the figure presets are interpretations of figure
// axes (the source plots never print sigma or width); all values stay
// configurable.
inline ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig c;
  EstimatorEntry kde;
  kde.kind = EstimatorEntry::Kind::kde;
  kde.shape = 2.0;
  kde.schedule = BandwidthSchedule::power_law(1.0, -0.2);
  kde.label = "kde";
  EstimatorEntry hist;
  hist.kind = EstimatorEntry::Kind::histogram;
  hist.alpha = 1.0;
  hist.label = "histogram";
  c.estimators = {kde, hist};

  if (name == "narrow-gaussian") {
    c.target = {TargetSpec::Kind::gaussian, 50.0, 3.0};
  } else if (name == "wide-gaussian") {
    c.target = {TargetSpec::Kind::gaussian, 50.0, 20.0};
  } else if (name == "narrow-uniform") {
    c.target.kind = TargetSpec::Kind::uniform;
    c.target.lo = 45.0;
    c.target.hi = 55.0;
  } else if (name == "wide-uniform") {
    c.target.kind = TargetSpec::Kind::uniform;
    c.target.lo = 20.0;
    c.target.hi = 80.0;
  } else if (name == "paper-shaped") {
    c.target = {TargetSpec::Kind::gaussian, 50.0, 3.0};
    c.fit_bespoke = true;
  } else if (name == "silverman-variant") {
    c.target = {TargetSpec::Kind::gaussian, 50.0, 3.0};
    c.fit_bespoke = true;
    c.estimators[0].schedule = BandwidthSchedule::silverman();
  } else {
    throw ConfigError("unknown preset: " + name);
  }
  return c;
}

// --- orchestration ----------------------------------------------------------

struct RunManifest {
  nlohmann::json config;
  std::vector<std::pair<std::string, std::string>> artifacts;  // (file, digest)
  std::map<std::string, std::string> versions;
  std::map<std::string, double> timings;  // stage -> seconds (sibling file)
  nlohmann::json seeds;
};

inline void validate_config(const ExperimentConfig& c) {
  if (c.num_digits < 1) throw ConfigError("config: num_digits must be >= 1");
  if (c.sample_count < 0) throw ConfigError("config: sample_count must be >= 0");
  if (c.estimators.empty()) throw ConfigError("config: need at least one estimator");
  if (c.output_dir.empty()) throw ConfigError("config: output_dir must be set");
  for (int n : c.effective_context_lengths())
    if (n > c.sample_count) throw ConfigError("config: context length exceeds sample count");
  if (c.embedding.dimensions < 1) throw ConfigError("config: embedding dimensions must be >= 1");
}

inline DiscretePdf make_target(const TargetSpec& spec, const Grid& grid) {
  switch (spec.kind) {
    case TargetSpec::Kind::gaussian:
      return make_gaussian_target(spec.mean, spec.sigma, grid);
    case TargetSpec::Kind::uniform:
      return make_uniform_target(spec.lo, spec.hi, grid);
    case TargetSpec::Kind::gp_random:
      return generate_random_pdf(spec.gp, grid);
    case TargetSpec::Kind::from_file: {
      DiscretePdf pdf = pdf_from_json(nlohmann::json::parse(read_file(spec.file)));
      if (!(pdf.grid == grid)) throw ConfigError("target file grid does not match config");
      return pdf;
    }
  }
  throw ConfigError("unknown target kind");
}

inline std::string version_string() { return "0.1.0"; }

inline RunManifest run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  namespace fs = std::filesystem;
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  RunManifest manifest;
  manifest.config = to_json(config);
  manifest.versions["artifact"] = version_string();
  manifest.versions["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                               std::to_string(EIGEN_MAJOR_VERSION) + "." +
                               std::to_string(EIGEN_MINOR_VERSION);
  manifest.versions["json"] = std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH);
  manifest.seeds["sample"] = config.sample_seed;
  if (config.target.kind == TargetSpec::Kind::gp_random)
    manifest.seeds["gp"] = config.target.gp.seed;

  std::vector<fs::path> written;
  std::string stage = "setup";
  auto clock = [t0 = std::chrono::steady_clock::now()]() mutable {
    auto t1 = std::chrono::steady_clock::now();
    double dt = std::chrono::duration<double>(t1 - t0).count();
    t0 = t1;
    return dt;
  };
  auto emit = [&](const std::string& name, const std::string& content) {
    write_file(out_dir / name, content);
    written.push_back(out_dir / name);
    manifest.artifacts.emplace_back(name, fnv1a_hex(content));
  };

  try {
    stage = "target";
    Grid grid(config.num_digits);
    DiscretePdf target = make_target(config.target, grid);
    manifest.timings["target"] = clock();

    stage = "sampling";
    SampleSet samples = sample(target, config.sample_count, config.sample_seed);
    const std::vector<int> ns = config.effective_context_lengths();
    manifest.timings["sampling"] = clock();

    stage = "trajectories";
    SerializationConfig ser;
    ser.num_digits = config.num_digits;
    std::vector<Trajectory> trajectories;
    for (const EstimatorEntry& entry : config.estimators) {
      if (entry.kind == EstimatorEntry::Kind::kde) {
        EstimatorConfig ec = EstimatorConfig::kde_config(
            entry.schedule, entry.shape, entry.label.empty() ? "kde" : entry.label);
        trajectories.push_back(de_trajectory(ec, samples, ns, grid));
      } else if (entry.kind == EstimatorEntry::Kind::histogram) {
        EstimatorConfig ec = EstimatorConfig::histogram_config(
            entry.alpha, entry.label.empty() ? "histogram" : entry.label);
        trajectories.push_back(de_trajectory(ec, samples, ns, grid));
      } else {
        auto provider = make_provider(entry.provider, ser);
        IclExtraction ext = icl_trajectory(*provider, samples, ns, ser);
        if (ext.partial)
          throw ProviderError("provider trajectory incomplete at " + ext.error);
        ext.trajectory.label = entry.label.empty() ? "provider" : entry.label;
        trajectories.push_back(std::move(ext.trajectory));
      }
    }
    manifest.timings["trajectories"] = clock();

    stage = "bespoke-fit";
    std::vector<FitSchedule> schedules;
    if (config.fit_bespoke) {
      std::size_t original = trajectories.size();
      for (std::size_t i = 0; i < original; ++i) {
        BespokeFitResult fit = fit_bespoke_schedule(trajectories[i], samples);
        schedules.push_back(std::move(fit.schedule));
        trajectories.push_back(std::move(fit.imitation));
      }
    }
    manifest.timings["bespoke-fit"] = clock();

    stage = "embedding";
    std::vector<DiscretePdf> points;
    std::vector<std::string> labels;
    points.push_back(uniform_ignorance(grid));
    labels.push_back("ignorance");
    points.push_back(target);
    labels.push_back("truth");
    if (config.embedding.joint_guides) {
      auto arc = hellinger_geodesic(uniform_ignorance(grid), target,
                                    config.embedding.geodesic_points);
      for (std::size_t i = 0; i < arc.size(); ++i) {
        double t = static_cast<double>(i) / (arc.size() - 1);
        points.push_back(std::move(arc[i]));
        labels.push_back("geodesic:t=" + fmt_double(t));
      }
      auto vs = default_variance_grid(config.embedding.submanifold_points);
      auto members = gaussian_submanifold(grid, vs);
      for (std::size_t i = 0; i < members.size(); ++i) {
        points.push_back(std::move(members[i]));
        labels.push_back("submanifold:v=" + fmt_double(vs[i]));
      }
    }
    for (const Trajectory& traj : trajectories) {
      for (std::size_t i = 0; i < traj.pdfs.size(); ++i) {
        points.push_back(traj.pdfs[i]);
        labels.push_back(traj.label + ":n=" + std::to_string(traj.context_lengths[i]));
      }
    }
    DistanceMatrix dm = pairwise_distances(points, config.embedding.metric, labels);
    Embedding emb = inpca_embed(dm);
    manifest.timings["embedding"] = clock();

    stage = "write";
    emit("trajectories.json", trajectories_to_json(grid, target, trajectories).dump(2) + "\n");
    emit("embedding.csv", embedding_to_csv(emb, config.embedding.dimensions));
    emit("embedding.json", embedding_spectrum_json(emb).dump(2) + "\n");
    if (config.fit_bespoke) {
      std::string csv = "source,n,h,sigma_h,s,sigma_s,residual,converged\n";
      for (const FitSchedule& sched : schedules) {
        for (const FitPoint& p : sched.points) {
          csv += sched.source_label + "," + std::to_string(p.context_length) + "," +
                 fmt_double(p.h) + "," + fmt_double(p.sigma_h) + "," + fmt_double(p.s) + "," +
                 fmt_double(p.sigma_s) + "," + fmt_double(p.residual) + "," +
                 (p.converged ? "true" : "false") + "\n";
        }
      }
      emit("schedules.csv", csv);
    }

    nlohmann::json mj;
    mj["config"] = manifest.config;
    nlohmann::json arts = nlohmann::json::array();
    for (const auto& [file, digest] : manifest.artifacts)
      arts.push_back({{"file", file}, {"digest", digest}});
    mj["artifacts"] = arts;
    mj["versions"] = manifest.versions;
    mj["seeds"] = manifest.seeds;
    mj["timings_file"] = "timings.json";
    write_file(out_dir / "manifest.json", mj.dump(2) + "\n");
    written.push_back(out_dir / "manifest.json");
    manifest.timings["write"] = clock();

    nlohmann::json tj(manifest.timings);
    write_file(out_dir / "timings.json", tj.dump(2) + "\n");
  } catch (const std::exception& e) {
    for (const fs::path& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    std::string msg = "stage " + stage + ": " + e.what();
    if (dynamic_cast<const ProtocolError*>(&e)) throw ProtocolError(msg);
    if (dynamic_cast<const ProviderError*>(&e)) throw ProviderError(msg);
    if (dynamic_cast<const ConfigError*>(&e)) throw ConfigError(msg);
    if (dynamic_cast<const DimensionError*>(&e)) throw DimensionError(msg);
    throw NumericalError(msg);
  }
  return manifest;
}

// --- plot data --------------------------------------------------------------

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string::npos) {
      out.push_back(line.substr(pos));
      break;
    }
    out.push_back(line.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

// Long-format chart data from a finished run. Series names follow the figure
// legends: ignorance, truth, geodesic, submanifold, one series per estimator.
inline std::vector<std::string> emit_plot_data(const std::string& run_dir,
                                               const std::string& kind) {
  namespace fs = std::filesystem;
  const fs::path dir(run_dir);
  nlohmann::json manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  auto require_artifact = [&](const std::string& name) {
    for (const auto& a : manifest.at("artifacts"))
      if (a.at("file").get<std::string>() == name) {
        if (!fs::exists(dir / name)) throw ConfigError("plot-data: missing artifact " + name);
        return;
      }
    throw ConfigError("plot-data: manifest lists no artifact " + name);
  };
  std::vector<std::string> outputs;

  if (kind == "trajectory-chart") {
    require_artifact("embedding.csv");
    std::istringstream in(read_file(dir / "embedding.csv"));
    std::string line;
    std::getline(in, line);  // header
    std::string csv = "series,point,coord_1,coord_2\n";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = split_csv_line(line);
      std::string label = cells[0];
      auto colon = label.find(':');
      std::string series = (colon == std::string::npos) ? label : label.substr(0, colon);
      std::string point = (colon == std::string::npos) ? "" : label.substr(colon + 1);
      std::string c1 = cells.size() > 1 ? cells[1] : "0";
      std::string c2 = cells.size() > 2 ? cells[2] : "0";
      csv += series + "," + point + "," + c1 + "," + c2 + "\n";
    }
    write_file(dir / "plot_trajectory.csv", csv);
    outputs.push_back("plot_trajectory.csv");
  } else if (kind == "schedule-chart") {
    require_artifact("schedules.csv");
    std::istringstream in(read_file(dir / "schedules.csv"));
    std::string line;
    std::getline(in, line);  // header
    std::map<std::string, std::string> per_source;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto cells = split_csv_line(line);
      if (cells.size() < 8) throw ConfigError("plot-data: malformed schedules.csv row");
      std::string& body = per_source[cells[0]];
      if (body.empty()) body = "n,h,sigma_h,s,sigma_s\n";
      body += cells[1] + "," + cells[2] + "," + cells[3] + "," + cells[4] + "," + cells[5] + "\n";
    }
    for (const auto& [source, body] : per_source) {
      std::string name = "plot_schedule_" + source + ".csv";
      write_file(dir / name, body);
      outputs.push_back(name);
    }
  } else if (kind == "spectrum") {
    require_artifact("embedding.json");
    nlohmann::json spec = nlohmann::json::parse(read_file(dir / "embedding.json"));
    std::string csv = "dimension,explained\n";
    auto explained = spec.at("explained").get<std::vector<double>>();
    for (std::size_t i = 0; i < explained.size(); ++i)
      csv += std::to_string(i + 1) + "," + fmt_double(explained[i]) + "\n";
    write_file(dir / "plot_spectrum.csv", csv);
    outputs.push_back("plot_spectrum.csv");
  } else {
    throw ConfigError("plot-data: unknown kind " + kind);
  }
  return outputs;
}

// Records every (context, digit_probs) exchange of a provider-driven
// trajectory run into a JSONL replay file.
inline Trajectory capture_session(const ProviderSpec& spec, const ExperimentConfig& config,
                                  const std::string& replay_path) {
  Grid grid(config.num_digits);
  DiscretePdf target = make_target(config.target, grid);
  SampleSet samples = sample(target, config.sample_count, config.sample_seed);
  SerializationConfig ser;
  ser.num_digits = config.num_digits;
  auto provider = make_provider(spec, ser);
  RecordingProvider recorder(*provider);
  IclExtraction ext =
      icl_trajectory(recorder, samples, config.effective_context_lengths(), ser);
  if (ext.partial) throw ProviderError("capture: " + ext.error);
  recorder.save(replay_path);
  return ext.trajectory;
}

}  // namespace denskit
