#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "relsub/data.hpp"
#include "relsub/model.hpp"
#include "relsub/types.hpp"

namespace relsub {

// One realized draw: dataset index, the probability it was drawn with, and
// the estimator weight. General subsampling fills weight = 1/(r * prob);
// censoring subsampling uses weight 1 for the uncensored block and
// 1/((r - n0) * prob) for censored draws.
struct WeightedDraw {
  std::uint32_t index = 0;
  double prob = 1.0;
  double weight = 1.0;
};

// Per-observation censored/truncated log-likelihood contribution
//   (1 - C) log f(t) + C log S(t) - log S(t_trunc)
// with score and Hessian assembled from the model derivatives.
Eval obs_loglik_eval(const ParamVector& params, const Observation& obs, int order);
double obs_loglik(const ParamVector& params, const Observation& obs);
Vec obs_score(const ParamVector& params, const Observation& obs);
Mat obs_hessian(const ParamVector& params, const Observation& obs);

// Full-data objective: the mean of obs_loglik over the dataset, with mean
// score and mean Hessian. Parallelized with a deterministic pairwise
// reduction (results do not depend on thread count).
Eval full_loglik_eval(const ParamVector& params, const Dataset& data, int order);
double full_loglik(const ParamVector& params, const Dataset& data);
Vec full_loglik_grad(const ParamVector& params, const Dataset& data);
Mat full_loglik_hess(const ParamVector& params, const Dataset& data);

// General-subsampling pseudo log-likelihood (1/r) sum 1/prob_i * l_i. Note
// the probabilities live on the n-simplex, so this targets n times the mean
// full-data objective; maximizers are unaffected.
Eval weighted_loglik_general_eval(const ParamVector& params, std::span<const WeightedDraw> draws,
                                  const Dataset& data, int order);
double weighted_loglik_general(const ParamVector& params, std::span<const WeightedDraw> draws,
                               const Dataset& data);

// Censoring-subsampling pseudo log-likelihood: sum of weight_i * l_i where
// the first n_uncensored draws are the complete-data block with weight 1.
Eval weighted_loglik_censoring_eval(const ParamVector& params,
                                    std::span<const WeightedDraw> draws,
                                    std::size_t n_uncensored, const Dataset& data, int order);
double weighted_loglik_censoring(const ParamVector& params, std::span<const WeightedDraw> draws,
                                 std::size_t n_uncensored, const Dataset& data);

}  // namespace relsub
