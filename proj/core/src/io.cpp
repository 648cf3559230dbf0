#include <hombeat/io.hpp>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace hombeat::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json scene_object(const Scene& scene) {
  ordered_json j;
  if (const auto* g = std::get_if<GaussianSpec>(&scene.wavepacket())) {
    j["wavepacket"] = {{"type", "gaussian"}, {"sigma_k", g->sigma_k}};
  } else {
    const auto& t = std::get<TabulatedSpec>(scene.wavepacket());
    j["wavepacket"] = {{"type", "tabulated"},
                       {"points", t.grid.size()},
                       {"k_min", t.grid.front()},
                       {"k_max", t.grid.back()},
                       {"sigma_k", scene.sigma_k()}};
  }
  j["delta_x"] = scene.delta_x();
  j["centroid"] = scene.centroid();
  j["x0"] = scene.x0();
  return j;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{}", x); }

void write_batch_csv(std::ostream& out, const SampleBatch& batch) {
  out << "delta_k,tag\n";
  for (const Outcome& o : batch.outcomes)
    out << format_double(o.delta_k) << ',' << tag_char(o.tag) << '\n';
}

void write_tags_csv(std::ostream& out, std::span<const Tag> tags) {
  out << "tag\n";
  for (Tag t : tags) out << tag_char(t) << '\n';
}

std::string scene_json(const Scene& scene) { return scene_object(scene).dump(); }

std::string study_report_json(const StudyReport& report) {
  ordered_json j;
  j["scene"] = scene_object(report.scene);
  j["seed"] = report.seed;
  j["rows"] = ordered_json::array();
  for (const StudyRow& row : report.rows) {
    j["rows"].push_back({{"n", row.n},
                         {"reps", row.reps},
                         {"var_ratio", row.var_ratio},
                         {"mean_ratio", row.mean_ratio}});
  }
  return j.dump(2);
}

void write_study_csv(std::ostream& out, const StudyReport& report) {
  out << "n,reps,var_ratio,mean_ratio\n";
  for (const StudyRow& row : report.rows)
    out << row.n << ',' << row.reps << ',' << format_double(row.var_ratio) << ','
        << format_double(row.mean_ratio) << '\n';
}

}  // namespace hombeat::io
