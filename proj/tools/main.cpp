#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <hombeat/estimator.hpp>
#include <hombeat/fisher.hpp>
#include <hombeat/io.hpp>
#include <hombeat/version.hpp>

#include "run_config.hpp"

namespace {

using namespace hombeat;
using cli::RunConfig;

Scene build_scene(const RunConfig& cfg, double delta_x) {
  WavepacketSpec spec = cfg.wavepacket.empty() ? make_gaussian(cfg.sigma_k)
                                               : load_wavepacket_csv(cfg.wavepacket);
  const double x0 = std::isnan(cfg.x0) ? cfg.centroid : cfg.x0;
  return Scene(std::move(spec), delta_x, cfg.centroid, x0);
}

// Two comment lines on top of every CSV: version, then the config echo.
std::string csv_meta(const RunConfig& cfg) {
  return fmt::format("# hombeat {}\n# config={}\n", version, cli::to_json(cfg).dump());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

nlohmann::ordered_json meta_object(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["version"] = version;
  j["config"] = cli::to_json(cfg);
  return j;
}

int cmd_beats(const RunConfig& cfg) {
  const Scene scene = build_scene(cfg, cfg.delta_x);
  if (!scene.aligned()) throw std::runtime_error("beats: requires x0 == centroid");

  const double b = scene.envelope().support_halfwidth();
  constexpr int points = 801;
  std::ostringstream out;
  out << csv_meta(cfg) << "delta_k,p_bunch,p_antibunch,envelope\n";
  for (int i = 0; i < points; ++i) {
    const double dk = -b + 2.0 * b * static_cast<double>(i) / (points - 1);
    out << io::format_double(dk) << ',' << io::format_double(aligned_density(scene, {dk, Tag::Bunch}))
        << ',' << io::format_double(aligned_density(scene, {dk, Tag::Antibunch})) << ','
        << io::format_double(scene.envelope()(dk)) << '\n';
  }
  write_text_file(cfg.out, out.str());
  return 0;
}

int cmd_sample(const RunConfig& cfg) {
  const Scene scene = build_scene(cfg, cfg.delta_x);
  if (cfg.n < 1) throw std::runtime_error("sample: n must be >= 1");

  std::ostringstream out;
  out << csv_meta(cfg);
  if (cfg.mode == "resolved") {
    const SampleBatch batch = draw(scene, cfg.seed, cfg.n);
    io::write_batch_csv(out, batch);
  } else if (cfg.mode == "bucket") {
    if (!scene.aligned()) throw std::runtime_error("sample: bucket mode requires x0 == centroid");
    const auto tags = draw_bucket(scene, cfg.seed, cfg.n);
    io::write_tags_csv(out, tags);
  } else {
    throw std::runtime_error("sample: mode must be resolved or bucket");
  }
  write_text_file(cfg.out, out.str());

  auto meta = meta_object(cfg);
  meta["scene"] = nlohmann::ordered_json::parse(io::scene_json(scene));
  write_text_file(cfg.out + ".meta.json", meta.dump(2) + "\n");
  return 0;
}

int cmd_fisher(const RunConfig& cfg) {
  const Scene base = build_scene(cfg, cfg.dx_min);
  if (!base.aligned()) throw std::runtime_error("fisher: requires x0 == centroid");
  if (cfg.dx_steps < 2 || !(cfg.dx_max > cfg.dx_min))
    throw std::runtime_error("fisher: need dx_max > dx_min and dx_steps >= 2");

  std::ostringstream out;
  out << csv_meta(cfg) << "delta_x,fisher,fisher_bucket,crb\n";
  for (std::uint64_t i = 0; i < cfg.dx_steps; ++i) {
    const double dx = cfg.dx_min + (cfg.dx_max - cfg.dx_min) * static_cast<double>(i) /
                                       static_cast<double>(cfg.dx_steps - 1);
    const Scene scene = base.with_delta_x(dx);
    const double f = fisher_matrix(scene).f11;
    const double fnr = fisher_bucket(scene);
    out << io::format_double(dx) << ',' << io::format_double(f) << ',' << io::format_double(fnr)
        << ',' << io::format_double(crb(f, cfg.n)) << '\n';
  }
  write_text_file(cfg.out, out.str());
  return 0;
}

int cmd_study(const RunConfig& cfg, unsigned threads) {
  std::vector<double> separations;
  if (cfg.study_default_scenes) {
    // separations at half and twice the diffraction scale
    const double sigma_x = build_scene(cfg, 0.0).sigma_x();
    separations = {0.5 * sigma_x, 2.0 * sigma_x};
  } else {
    separations = {cfg.delta_x};
  }
  std::vector<std::size_t> n_list(cfg.n_list.begin(), cfg.n_list.end());

  nlohmann::ordered_json doc = meta_object(cfg);
  doc["studies"] = nlohmann::ordered_json::array();
  std::ostringstream csv;
  csv << csv_meta(cfg) << "delta_x,n,reps,var_ratio,mean_ratio\n";

  for (double dx : separations) {
    const Scene scene = build_scene(cfg, dx);
    if (!scene.aligned()) throw std::runtime_error("study: requires x0 == centroid");
    const StudyReport report = run_study(scene, n_list, cfg.reps, cfg.seed, threads);
    doc["studies"].push_back(nlohmann::ordered_json::parse(io::study_report_json(report)));
    for (const StudyRow& row : report.rows)
      csv << io::format_double(dx) << ',' << row.n << ',' << row.reps << ','
          << io::format_double(row.var_ratio) << ',' << io::format_double(row.mean_ratio) << '\n';
  }

  std::filesystem::path json_path(cfg.out);
  std::filesystem::path csv_path(cfg.out);
  if (json_path.extension() == ".json")
    csv_path.replace_extension(".csv");
  else
    csv_path += ".csv";
  write_text_file(json_path, doc.dump(2) + "\n");
  write_text_file(csv_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference beats: curves, sampling, information, estimator studies"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file; flags override");

  RunConfig cfg;
  unsigned threads = 0;

  auto add_scene_flags = [&](CLI::App* sub) {
    sub->add_option("--sigma-k", cfg.sigma_k, "Momentum-space std dev of the Gaussian wavepacket");
    sub->add_option("--wavepacket", cfg.wavepacket, "CSV (k,amplitude_sq) tabulated |phi|^2");
    sub->add_option("--centroid", cfg.centroid, "Source centroid x_s");
    sub->add_option("--x0", cfg.x0, "Reference photon center (default: centroid)");
    sub->add_option("--seed", cfg.seed, "PRNG seed");
    sub->add_option("--out", cfg.out, "Output path")->required();
  };

  CLI::App* beats = app.add_subcommand("beats", "Beat curves P(delta_k, X) on a uniform grid");
  add_scene_flags(beats);
  beats->add_option("--delta-x", cfg.delta_x, "Source separation");

  CLI::App* sample = app.add_subcommand("sample", "Draw detection events");
  add_scene_flags(sample);
  sample->add_option("--delta-x", cfg.delta_x, "Source separation");
  sample->add_option("--mode", cfg.mode, "resolved | bucket");
  sample->add_option("--n", cfg.n, "Number of events");

  CLI::App* fisher = app.add_subcommand("fisher", "Information sweep over delta_x");
  add_scene_flags(fisher);
  fisher->add_option("--n", cfg.n, "Pair count entering the CRB column");
  fisher->add_option("--dx-min", cfg.dx_min, "Sweep start");
  fisher->add_option("--dx-max", cfg.dx_max, "Sweep end");
  fisher->add_option("--dx-steps", cfg.dx_steps, "Sweep points");

  CLI::App* study = app.add_subcommand("study", "Monte-Carlo estimator study");
  add_scene_flags(study);
  CLI::Option* study_dx =
      study->add_option("--delta-x", cfg.delta_x,
                        "Source separation (default: both 0.5 and 2 times sigma_x)");
  study->add_option("--n", cfg.n_list, "Samples per trial, comma separated")->delimiter(',');
  study->add_option("--reps", cfg.reps, "Monte-Carlo repetitions per n");
  study->add_option("--threads", threads, "Worker threads (0 = hardware); never changes results");

  try {
    app.parse(argc, argv);
    if (beats->parsed()) {
      cfg.command = "beats";
      return cmd_beats(cfg);
    }
    if (sample->parsed()) {
      cfg.command = "sample";
      return cmd_sample(cfg);
    }
    if (fisher->parsed()) {
      cfg.command = "fisher";
      return cmd_fisher(cfg);
    }
    cfg.command = "study";
    cfg.study_default_scenes = study_dx->count() == 0;
    return cmd_study(cfg, threads);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "hombeat: " << e.what() << "\n";
    return 1;
  }
}
