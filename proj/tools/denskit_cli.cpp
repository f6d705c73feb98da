#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "denskit/experiment.hpp"

namespace dk = denskit;
using nlohmann::json;

namespace {

dk::ExperimentConfig load_config(const std::string& preset, const std::string& config_file) {
  if (!preset.empty() && !config_file.empty())
    throw dk::ConfigError("give either --preset or --config, not both");
  if (!preset.empty()) return dk::make_preset(preset);
  if (!config_file.empty())
    return dk::config_from_json(json::parse(dk::read_file(config_file)));
  throw dk::ConfigError("need --preset or --config");
}

dk::SampleSet load_samples(const std::string& path) {
  json j = json::parse(dk::read_file(path));
  dk::SampleSet s;
  s.bin_indices = j.at("bin_indices").get<std::vector<std::int64_t>>();
  s.seed = j.value("seed", std::uint64_t{0});
  return s;
}

void save_samples(const dk::SampleSet& s, const std::string& path) {
  json j;
  j["bin_indices"] = s.bin_indices;
  j["seed"] = s.seed;
  dk::write_file(path, j.dump(2) + "\n");
}

json trajectory_file_json(const dk::Trajectory& traj) {
  json j = dk::trajectory_to_json(traj);
  j["grid"] = {{"num_digits", traj.pdfs.empty() ? 2 : traj.pdfs[0].grid.num_digits},
               {"num_bins", traj.pdfs.empty() ? 100 : traj.pdfs[0].grid.num_bins}};
  return j;
}

dk::Trajectory load_trajectory(const std::string& path) {
  json j = json::parse(dk::read_file(path));
  dk::Grid grid(j.at("grid").at("num_digits").get<int>());
  return dk::trajectory_from_json(j, grid);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"in-context density-estimation trajectories: targets, estimators, "
               "bespoke kernel fits, InPCA embeddings, digit-hierarchy probes"};
  app.require_subcommand(1);

  // generate-target
  auto* gen = app.add_subcommand("generate-target", "Write a target PMF as JSON");
  std::string gen_preset, gen_kind = "gaussian", gen_out;
  int gen_digits = 2;
  double gen_mean = 50.0, gen_sigma = 3.0, gen_lo = 45.0, gen_hi = 55.0;
  double gen_l = 0.1, gen_jitter = 1e-10;
  int gen_resolution = 1000;
  std::uint64_t gen_seed = 0;
  gen->add_option("--preset", gen_preset, "narrow-gaussian|wide-gaussian|narrow-uniform|wide-uniform");
  gen->add_option("--kind", gen_kind, "gaussian|uniform|gp-random");
  gen->add_option("--digits", gen_digits, "grid digits N (10^N bins)");
  gen->add_option("--mean", gen_mean);
  gen->add_option("--sigma", gen_sigma);
  gen->add_option("--lo", gen_lo);
  gen->add_option("--hi", gen_hi);
  gen->add_option("--l", gen_l, "GP correlation length on the unit interval");
  gen->add_option("--resolution", gen_resolution, "GP grid points");
  gen->add_option("--gp-seed", gen_seed);
  gen->add_option("--jitter", gen_jitter);
  gen->add_option("--out", gen_out)->required();
  gen->callback([&] {
    dk::TargetSpec spec;
    if (!gen_preset.empty()) {
      spec = dk::make_preset(gen_preset).target;
    } else if (gen_kind == "gaussian") {
      spec.kind = dk::TargetSpec::Kind::gaussian;
      spec.mean = gen_mean;
      spec.sigma = gen_sigma;
    } else if (gen_kind == "uniform") {
      spec.kind = dk::TargetSpec::Kind::uniform;
      spec.lo = gen_lo;
      spec.hi = gen_hi;
    } else if (gen_kind == "gp-random") {
      spec.kind = dk::TargetSpec::Kind::gp_random;
      spec.gp = {gen_l, gen_resolution, gen_seed, gen_jitter};
    } else {
      throw dk::ConfigError("unknown target kind " + gen_kind);
    }
    dk::Grid grid(gen_digits);
    dk::write_file(gen_out, dk::pdf_to_json(dk::make_target(spec, grid)).dump(2) + "\n");
  });

  // sample
  auto* smp = app.add_subcommand("sample", "Draw seeded i.i.d. samples from a target PMF");
  std::string smp_target, smp_out;
  int smp_count = 200;
  std::uint64_t smp_seed = 7;
  smp->add_option("--target", smp_target)->required();
  smp->add_option("--count", smp_count);
  smp->add_option("--seed", smp_seed);
  smp->add_option("--out", smp_out)->required();
  smp->callback([&] {
    dk::DiscretePdf target = dk::pdf_from_json(json::parse(dk::read_file(smp_target)));
    save_samples(dk::sample(target, smp_count, smp_seed), smp_out);
  });

  // estimate
  auto* est = app.add_subcommand("estimate", "Run a classical estimator on a sample prefix");
  std::string est_samples, est_kind = "kde", est_schedule = "power-law", est_out;
  int est_digits = 2, est_n = -1;
  double est_shape = 2.0, est_coeff = 1.0, est_exponent = -0.2, est_h = 1.0, est_alpha = 1.0;
  est->add_option("--samples", est_samples)->required();
  est->add_option("--kind", est_kind, "kde|histogram");
  est->add_option("--digits", est_digits);
  est->add_option("--n", est_n, "prefix length (default: all samples)");
  est->add_option("--shape", est_shape, "kernel shape s; 'inf' via --tophat");
  est->add_flag_callback("--tophat", [&] { est_shape = dk::kTophat; }, "use the tophat kernel");
  est->add_option("--schedule", est_schedule, "power-law|silverman|constant");
  est->add_option("--coeff", est_coeff);
  est->add_option("--exponent", est_exponent);
  est->add_option("--bandwidth", est_h, "fixed h for the constant schedule");
  est->add_option("--alpha", est_alpha);
  est->add_option("--out", est_out)->required();
  est->callback([&] {
    dk::Grid grid(est_digits);
    dk::SampleSet samples = load_samples(est_samples);
    int n = est_n < 0 ? static_cast<int>(samples.bin_indices.size()) : est_n;
    dk::EstimatorConfig config;
    if (est_kind == "kde") {
      dk::BandwidthSchedule sched;
      if (est_schedule == "power-law")
        sched = dk::BandwidthSchedule::power_law(est_coeff, est_exponent);
      else if (est_schedule == "silverman")
        sched = dk::BandwidthSchedule::silverman();
      else if (est_schedule == "constant")
        sched = dk::BandwidthSchedule::constant(est_h);
      else
        throw dk::ConfigError("unknown schedule " + est_schedule);
      config = dk::EstimatorConfig::kde_config(sched, est_shape);
    } else if (est_kind == "histogram") {
      config = dk::EstimatorConfig::histogram_config(est_alpha);
    } else {
      throw dk::ConfigError("unknown estimator kind " + est_kind);
    }
    dk::Trajectory traj = dk::de_trajectory(config, samples, {n}, grid);
    dk::write_file(est_out, dk::pdf_to_json(traj.pdfs[0]).dump(2) + "\n");
  });

  // fit-bespoke
  auto* fit = app.add_subcommand("fit-bespoke",
                                 "Fit kernel (h, s) to a target PMF or a whole trajectory");
  std::string fit_samples, fit_target, fit_trajectory, fit_out, fit_imitation;
  int fit_n = -1;
  double fit_init_h = 0.0, fit_init_s = 0.0;
  bool fit_cold = false;
  fit->add_option("--samples", fit_samples)->required();
  fit->add_option("--target", fit_target, "single PMF to imitate");
  fit->add_option("--trajectory", fit_trajectory, "trajectory file to imitate");
  fit->add_option("--n", fit_n, "context length for --target mode");
  fit->add_option("--init-h", fit_init_h);
  fit->add_option("--init-s", fit_init_s);
  fit->add_flag("--cold", fit_cold, "disable warm starts in trajectory mode");
  fit->add_option("--out", fit_out)->required();
  fit->add_option("--imitation-out", fit_imitation, "write the imitation trajectory JSON");
  fit->callback([&] {
    dk::SampleSet samples = load_samples(fit_samples);
    if (!fit_target.empty() == !fit_trajectory.empty())
      throw dk::ConfigError("give exactly one of --target or --trajectory");
    if (!fit_target.empty()) {
      dk::DiscretePdf target = dk::pdf_from_json(json::parse(dk::read_file(fit_target)));
      int n = fit_n < 0 ? static_cast<int>(samples.bin_indices.size()) : fit_n;
      std::optional<std::pair<double, double>> init;
      if (fit_init_h > 0.0 && fit_init_s > 0.0) init = {{fit_init_h, fit_init_s}};
      dk::FitPoint p = dk::fit_bespoke_point(target, samples, n, init);
      json j;
      j["n"] = p.context_length;
      j["h"] = p.h;
      j["sigma_h"] = p.sigma_h;
      j["s"] = p.s;
      j["sigma_s"] = p.sigma_s;
      j["residual"] = p.residual;
      j["converged"] = p.converged;
      dk::write_file(fit_out, j.dump(2) + "\n");
    } else {
      dk::Trajectory traj = load_trajectory(fit_trajectory);
      dk::BespokeFitResult result = dk::fit_bespoke_schedule(traj, samples, !fit_cold);
      dk::write_file(fit_out, dk::fit_schedule_to_csv(result.schedule));
      if (!fit_imitation.empty())
        dk::write_file(fit_imitation, trajectory_file_json(result.imitation).dump(2) + "\n");
    }
  });

  // embed
  auto* emb = app.add_subcommand("embed", "Joint InPCA embedding of trajectory points");
  std::string emb_in, emb_metric = "hellinger-squared", emb_csv, emb_json;
  bool emb_no_guides = false;
  int emb_dims = 2, emb_geodesic = 256, emb_submanifold = 64;
  emb->add_option("--trajectories", emb_in)->required();
  emb->add_option("--metric", emb_metric, "hellinger-squared|l2-squared");
  emb->add_flag("--no-guides", emb_no_guides, "skip geodesic and submanifold guides");
  emb->add_option("--dims", emb_dims);
  emb->add_option("--geodesic-points", emb_geodesic);
  emb->add_option("--submanifold-points", emb_submanifold);
  emb->add_option("--out-csv", emb_csv)->required();
  emb->add_option("--out-json", emb_json)->required();
  emb->callback([&] {
    json j = json::parse(dk::read_file(emb_in));
    dk::Grid grid(j.at("grid").at("num_digits").get<int>());
    dk::DiscretePdf target{grid, j.at("target").get<std::vector<double>>()};
    target.validate();
    dk::PairwiseMetric metric = emb_metric == "l2-squared"
                                    ? dk::PairwiseMetric::l2_squared
                                    : dk::PairwiseMetric::hellinger_squared;
    if (emb_metric != "l2-squared" && emb_metric != "hellinger-squared")
      throw dk::ConfigError("unknown metric " + emb_metric);
    std::vector<dk::DiscretePdf> points{dk::uniform_ignorance(grid), target};
    std::vector<std::string> labels{"ignorance", "truth"};
    if (!emb_no_guides) {
      auto arc = dk::hellinger_geodesic(dk::uniform_ignorance(grid), target, emb_geodesic);
      for (std::size_t i = 0; i < arc.size(); ++i) {
        labels.push_back("geodesic:t=" + dk::fmt_double(double(i) / (arc.size() - 1)));
        points.push_back(std::move(arc[i]));
      }
      auto vs = dk::default_variance_grid(emb_submanifold);
      auto members = dk::gaussian_submanifold(grid, vs);
      for (std::size_t i = 0; i < members.size(); ++i) {
        labels.push_back("submanifold:v=" + dk::fmt_double(vs[i]));
        points.push_back(std::move(members[i]));
      }
    }
    for (const auto& tj : j.at("trajectories")) {
      dk::Trajectory traj = dk::trajectory_from_json(tj, grid);
      for (std::size_t i = 0; i < traj.pdfs.size(); ++i) {
        labels.push_back(traj.label + ":n=" + std::to_string(traj.context_lengths[i]));
        points.push_back(std::move(traj.pdfs[i]));
      }
    }
    dk::Embedding embedding = dk::inpca_embed(dk::pairwise_distances(points, metric, labels));
    dk::write_file(emb_csv, dk::embedding_to_csv(embedding, emb_dims));
    dk::write_file(emb_json, dk::embedding_spectrum_json(embedding).dump(2) + "\n");
  });

  // meta-embed
  auto* meta = app.add_subcommand("meta-embed", "InPCA over whole trajectories");
  std::string meta_in, meta_csv, meta_json;
  meta->add_option("--trajectories", meta_in)->required();
  meta->add_option("--out-csv", meta_csv)->required();
  meta->add_option("--out-json", meta_json)->required();
  meta->callback([&] {
    json j = json::parse(dk::read_file(meta_in));
    dk::Grid grid(j.at("grid").at("num_digits").get<int>());
    std::vector<dk::Trajectory> trajectories;
    for (const auto& tj : j.at("trajectories"))
      trajectories.push_back(dk::trajectory_from_json(tj, grid));
    dk::Embedding embedding = dk::meta_inpca(trajectories);
    dk::write_file(meta_csv, dk::embedding_to_csv(embedding));
    dk::write_file(meta_json, dk::embedding_spectrum_json(embedding).dump(2) + "\n");
  });

  // capture
  auto* cap = app.add_subcommand("capture", "Record an HTTP provider session to a replay file");
  std::string cap_endpoint, cap_preset, cap_config, cap_out, cap_traj;
  double cap_timeout = 30.0;
  int cap_retries = 3;
  cap->add_option("--endpoint", cap_endpoint)->required();
  cap->add_option("--preset", cap_preset);
  cap->add_option("--config", cap_config);
  cap->add_option("--timeout", cap_timeout);
  cap->add_option("--retries", cap_retries);
  cap->add_option("--out", cap_out)->required();
  cap->add_option("--trajectory-out", cap_traj);
  cap->callback([&] {
    dk::ExperimentConfig config = load_config(cap_preset, cap_config);
    dk::ProviderSpec spec;
    spec.kind = dk::ProviderSpec::Kind::http;
    spec.endpoint = cap_endpoint;
    spec.timeout_seconds = cap_timeout;
    spec.retries = cap_retries;
    dk::Trajectory traj = dk::capture_session(spec, config, cap_out);
    if (!cap_traj.empty())
      dk::write_file(cap_traj, trajectory_file_json(traj).dump(2) + "\n");
  });

  // replay
  auto* rep = app.add_subcommand("replay", "Rebuild a provider trajectory from a replay file");
  std::string rep_file, rep_preset, rep_config, rep_out;
  rep->add_option("--replay", rep_file)->required();
  rep->add_option("--preset", rep_preset);
  rep->add_option("--config", rep_config);
  rep->add_option("--out", rep_out)->required();
  rep->callback([&] {
    dk::ExperimentConfig config = load_config(rep_preset, rep_config);
    dk::Grid grid(config.num_digits);
    dk::DiscretePdf target = dk::make_target(config.target, grid);
    dk::SampleSet samples = dk::sample(target, config.sample_count, config.sample_seed);
    dk::SerializationConfig ser;
    ser.num_digits = config.num_digits;
    dk::ReplayProvider provider(rep_file);
    dk::IclExtraction ext =
        dk::icl_trajectory(provider, samples, config.effective_context_lengths(), ser);
    if (ext.partial) throw dk::ProviderError("replay: " + ext.error);
    ext.trajectory.label = "provider";
    dk::write_file(rep_out, trajectory_file_json(ext.trajectory).dump(2) + "\n");
  });

  // run
  auto* run = app.add_subcommand("run", "Full pipeline: target, samples, trajectories, "
                                        "optional bespoke fits, embedding, manifest");
  std::string run_preset, run_config, run_out;
  run->add_option("--preset", run_preset,
                  "narrow-gaussian|wide-gaussian|narrow-uniform|wide-uniform|paper-shaped|"
                  "silverman-variant");
  run->add_option("--config", run_config, "ExperimentConfig JSON file");
  run->add_option("--out", run_out, "output directory (overrides config)");
  run->callback([&] {
    dk::ExperimentConfig config = load_config(run_preset, run_config);
    if (!run_out.empty()) config.output_dir = run_out;
    dk::run_experiment(config);
    std::cout << (std::filesystem::path(config.output_dir) / "manifest.json").string() << "\n";
  });

  // plot-data
  auto* plot = app.add_subcommand("plot-data", "Emit long-format chart CSVs from a run directory");
  std::string plot_dir, plot_kind;
  plot->add_option("--dir", plot_dir)->required();
  plot->add_option("--kind", plot_kind, "trajectory-chart|schedule-chart|spectrum")->required();
  plot->callback([&] {
    for (const std::string& f : dk::emit_plot_data(plot_dir, plot_kind))
      std::cout << f << "\n";
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const dk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dk::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const dk::ProviderError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return 3;
  } catch (const dk::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
