#pragma once

#include <ostream>
#include <span>
#include <string>

#include <hombeat/estimator.hpp>

namespace hombeat::io {

/// Shortest round-trip decimal form of x, '.' decimal separator, no locale.
std::string format_double(double x);

/// Resolved batch as CSV: header `delta_k,tag`, one event per row, LF endings.
void write_batch_csv(std::ostream& out, const SampleBatch& batch);

/// Bucket run as CSV: header `tag`, one tag per row.
void write_tags_csv(std::ostream& out, std::span<const Tag> tags);

/// Scene summary as a JSON object with stable key order.
std::string scene_json(const Scene& scene);

/// Full study report (scene, seed, rows) as a JSON document.
std::string study_report_json(const StudyReport& report);

/// Study rows as CSV: header `n,reps,var_ratio,mean_ratio`.
void write_study_csv(std::ostream& out, const StudyReport& report);

}  // namespace hombeat::io
