#pragma once

#include <string>

#include "relsub/simulate.hpp"

namespace relsub {

// Serialization of reports. Wall-clock fields are kept out of these outputs
// so files are byte-identical across runs with the same seed; timings go to
// the separate timing document.
std::string estimate_report_json(const EstimateReport& report, const ModelKind& model,
                                 std::uint64_t seed, double time_scale);
std::string sim_summary_json(const SimSummary& summary);
std::string sim_summary_csv(const SimSummary& summary);
std::string sim_timing_json(const SimSummary& summary);
std::string sweep_csv(const std::vector<SweepPoint>& points);
std::string mttf_report_json(const MttfReport& report);

// Reads model tag, theta, pi_g, seed and time scale back from an estimate
// report file (used by the mttf subcommand).
struct StoredEstimate {
  EstimateReport report;
  ModelKind model;
  std::uint64_t seed = 0;
  double time_scale = 1.0;
};
StoredEstimate load_estimate_report(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace relsub
