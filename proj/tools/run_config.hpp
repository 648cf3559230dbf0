#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hombeat::cli {

// One flat bag of options shared by all subcommands; each subcommand reads
// the fields it cares about. Serialized into every output file so a run can
// be reproduced from its artifacts. Execution details that cannot change the
// numbers (worker count) deliberately stay out.
struct RunConfig {
  std::string command;

  double sigma_k = 1.0;
  std::string wavepacket;  // CSV path; empty selects the Gaussian spec
  double delta_x = 1.0;
  double centroid = 0.0;
  double x0 = std::nan("");  // NaN: follow the centroid

  std::string mode = "resolved";  // resolved | bucket
  std::uint64_t n = 1000;
  std::vector<std::uint64_t> n_list = {250, 500, 1000, 2000, 4000};
  std::uint64_t reps = 1000;
  std::uint64_t seed = 20250801;
  std::string out = "out.csv";

  double dx_min = 0.0;
  double dx_max = 4.0;
  std::uint64_t dx_steps = 81;

  bool study_default_scenes = true;  // no --delta-x given to `study`

  bool operator==(const RunConfig& other) const {
    auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
    return command == other.command && same(sigma_k, other.sigma_k) &&
           wavepacket == other.wavepacket && same(delta_x, other.delta_x) &&
           same(centroid, other.centroid) && same(x0, other.x0) && mode == other.mode &&
           n == other.n && n_list == other.n_list && reps == other.reps && seed == other.seed &&
           out == other.out && same(dx_min, other.dx_min) && same(dx_max, other.dx_max) &&
           dx_steps == other.dx_steps && study_default_scenes == other.study_default_scenes;
  }
};

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["sigma_k"] = c.sigma_k;
  j["wavepacket"] = c.wavepacket;
  j["delta_x"] = c.delta_x;
  j["centroid"] = c.centroid;
  if (std::isnan(c.x0))
    j["x0"] = nullptr;
  else
    j["x0"] = c.x0;
  j["mode"] = c.mode;
  j["n"] = c.n;
  j["n_list"] = c.n_list;
  j["reps"] = c.reps;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["dx_min"] = c.dx_min;
  j["dx_max"] = c.dx_max;
  j["dx_steps"] = c.dx_steps;
  j["study_default_scenes"] = c.study_default_scenes;
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.sigma_k = j.at("sigma_k").get<double>();
  c.wavepacket = j.at("wavepacket").get<std::string>();
  c.delta_x = j.at("delta_x").get<double>();
  c.centroid = j.at("centroid").get<double>();
  c.x0 = j.at("x0").is_null() ? std::nan("") : j.at("x0").get<double>();
  c.mode = j.at("mode").get<std::string>();
  c.n = j.at("n").get<std::uint64_t>();
  c.n_list = j.at("n_list").get<std::vector<std::uint64_t>>();
  c.reps = j.at("reps").get<std::uint64_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.out = j.at("out").get<std::string>();
  c.dx_min = j.at("dx_min").get<double>();
  c.dx_max = j.at("dx_max").get<double>();
  c.dx_steps = j.at("dx_steps").get<std::uint64_t>();
  c.study_default_scenes = j.at("study_default_scenes").get<bool>();
  return c;
}

}  // namespace hombeat::cli
