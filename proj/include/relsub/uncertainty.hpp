#pragma once

#include <span>
#include <vector>

#include "relsub/data.hpp"
#include "relsub/likelihood.hpp"
#include "relsub/model.hpp"
#include "relsub/sampling.hpp"
#include "relsub/types.hpp"

namespace relsub {

// Sandwich covariance report: V = M^{-1} Lambda M^{-1}, with per-parameter
// standard errors sqrt(diag(V)/r).
struct CovReport {
  Mat m_hat;
  Mat lambda_hat;
  Mat v_hat;
  Vec ese;
  double gamma = 0.0;  // r/n actually used (0 when the gamma terms are neglected)
};

// Subsample-only covariance estimate for a general-subsampling run. draws
// carry the mixed probabilities they were drawn with.
CovReport var_rds(std::span<const WeightedDraw> draws, const Dataset& data,
                  const ParamVector& theta_tilde, std::size_t r, bool include_gamma = true);

// Subsample-only covariance estimate for a censoring-subsampling run; the
// first n_uncensored draws are the complete-data block.
CovReport var_rdcs(std::span<const WeightedDraw> draws, std::size_t n_uncensored,
                   const Dataset& data, const ParamVector& theta_tilde, std::size_t r,
                   bool include_gamma = true);

// Full-data covariance matrices of the limit theorems, used as test oracles
// and for optimality diagnostics. r only scales the reported ese.
CovReport oracle_cov_general(const Dataset& data, const ParamVector& theta_hat,
                             const ProbVector& probs, std::size_t r = 1);
CovReport oracle_cov_censoring(const Dataset& data, const ParamVector& theta_hat,
                               const ProbVector& probs, std::size_t r = 1);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

// Per-parameter normal-approximation intervals theta_k +- z_{(1+level)/2} ese_k.
std::vector<Interval> confidence_interval(const Vec& theta, const Vec& ese, double level);

}  // namespace relsub
