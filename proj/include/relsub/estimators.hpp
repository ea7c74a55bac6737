#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relsub/data.hpp"
#include "relsub/model.hpp"
#include "relsub/optimizer.hpp"
#include "relsub/rng.hpp"
#include "relsub/uncertainty.hpp"

namespace relsub {

enum class Method { Full, Uniform, Rds, Rdcs };

std::string method_name(Method m);
Method parse_method(const std::string& name);

struct EstimatorSpec {
  Method method = Method::Full;
  std::size_t r = 0;        // subsample size
  std::size_t r0 = 0;       // pilot size (rds/rdcs)
  double xi = 0.1;          // mixing constant (xi for rds, xi_c for rdcs)
  OptimizerConfig optimizer;

  void validate() const;
};

struct EstimateReport {
  Method method = Method::Full;
  ParamVector theta_tilde;
  std::optional<CovReport> cov;
  std::optional<ParamVector> pilot_theta;
  std::vector<std::size_t> draws_used;  // per-stage draw counts
  double wall_time = 0.0;               // seconds
  bool converged = false;
  int iterations = 0;
  double final_grad_norm = 0.0;
};

// Full-data MLE of the censored/truncated log-likelihood.
EstimateReport full_mle(const Dataset& data, ModelKind model, const OptimizerConfig& opt = {});

// Uniform with-replacement subsampling estimator.
EstimateReport uniform_estimate(const Dataset& data, ModelKind model, std::size_t r,
                                const OptimizerConfig& opt, RngStream rng);

// Three-step general subsampling: uniform pilot of size r0, score-norm
// probabilities mixed with xi, inverse-probability-weighted fit of r draws.
EstimateReport rds_estimate(const Dataset& data, ModelKind model, std::size_t r, std::size_t r0,
                            double xi, const OptimizerConfig& opt, RngStream rng);

// Three-step censoring subsampling: keep every uncensored unit, draw r - n0
// censored units by survival-gradient norms mixed with xi_c. The pilot stage
// is skipped for the exponential model (its probabilities are parameter-free).
EstimateReport rdcs_estimate(const Dataset& data, ModelKind model, std::size_t r, std::size_t r0,
                             double xi_c, const OptimizerConfig& opt, RngStream rng);

EstimateReport run_estimator(const Dataset& data, ModelKind model, const EstimatorSpec& spec,
                             RngStream rng);

}  // namespace relsub
