#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "relsub/datagen.hpp"
#include "relsub/estimators.hpp"

namespace relsub {

enum class Reference { FullMle, TrueTheta };

// Monte-Carlo study configuration. Exactly one of gen / data_path is set;
// a fresh dataset is generated per replicate unless fix_dataset is on.
struct SimConfig {
  ModelKind model;
  std::optional<GenConfig> gen;
  std::optional<std::string> data_path;
  double time_scale = 1.0;
  std::vector<EstimatorSpec> estimators;
  std::size_t m = 1;
  Reference reference = Reference::FullMle;
  double ci_level = 0.95;
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = auto
  bool fix_dataset = false;

  void validate() const;
};

// Per-estimator aggregates over the successful replicates. se is the
// population standard deviation of the per-parameter errors, so
// rmse^2 = se^2 + bias^2 holds exactly.
struct EstimatorSummary {
  Method method = Method::Full;
  std::size_t successes = 0;
  std::size_t failures = 0;
  Vec rmse, bias, se, cp, mean_ese;
  double rmse_total = 0.0;      // (1/m) * sqrt(sum of squared error norms)
  double mean_wall_time = 0.0;  // not part of the deterministic outputs
};

struct SimSummary {
  ModelKind model;
  std::size_t m = 0;
  Reference reference = Reference::FullMle;
  std::uint64_t seed = 0;
  double mean_alpha = 0.0;          // mean realized censoring rate
  std::size_t reference_failures = 0;
  std::vector<EstimatorSummary> estimators;
};

SimSummary run_simulation(const SimConfig& config);

// Calibrates the censoring window for each target rate, reruns the study,
// and returns the per-alpha summaries. Calibration failures are recorded
// in place of a summary.
struct SweepPoint {
  double alpha = 0.0;
  std::optional<SimSummary> summary;
  std::string error;  // nonempty when calibration or the study failed
};
std::vector<SweepPoint> sweep_censoring(const SimConfig& base, const std::vector<double>& alphas);

enum class ProbMethod { Rds, Rdcs, Aopt };
ProbMethod parse_prob_method(const std::string& name);

// Per-unit log subsampling probabilities split by censoring flag, plus a
// binned summary of the finite rows.
void export_prob_histogram(const Dataset& data, const ParamVector& theta, ProbMethod method,
                           int bins, std::ostream& units_csv, std::ostream& bins_csv);

struct MttfReport {
  double mttf_model_scale = 0.0;
  double mttf_original_units = 0.0;
  Method method = Method::Full;
  std::uint64_t seed = 0;
  double time_scale = 1.0;
};

// MTTF at the reported estimate, with the time normalization inverted.
MttfReport mttf_report(const EstimateReport& estimate, double time_scale, std::uint64_t seed);

std::string reference_name(Reference r);
Reference parse_reference(const std::string& name);

}  // namespace relsub
