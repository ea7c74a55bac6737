#include "relsub/likelihood.hpp"

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/reduce.hpp"

namespace relsub {

Eval obs_loglik_eval(const ParamVector& params, const Observation& obs, int order) {
  const Eigen::Index d = static_cast<Eigen::Index>(params.dim());
  Eval e = Eval::zero(d);
  if (obs.censored) {
    if (obs.t == obs.t_trunc) return e;  // log S(t) - log S(t) cancels exactly
    e += log_survival_eval(params, obs.t, order);
  } else {
    e += log_pdf_eval(params, obs.t, order);
  }
  if (obs.t_trunc > 0.0) {
    Eval trunc = log_survival_eval(params, obs.t_trunc, order);
    trunc *= -1.0;
    e += trunc;
  }
  return e;
}

double obs_loglik(const ParamVector& params, const Observation& obs) {
  return obs_loglik_eval(params, obs, 0).value;
}

Vec obs_score(const ParamVector& params, const Observation& obs) {
  return obs_loglik_eval(params, obs, 1).grad;
}

Mat obs_hessian(const ParamVector& params, const Observation& obs) {
  return obs_loglik_eval(params, obs, 2).hess;
}

Eval full_loglik_eval(const ParamVector& params, const Dataset& data, int order) {
  if (data.empty()) throw EmptyDataset();
  const Eigen::Index d = static_cast<Eigen::Index>(params.dim());
  Eval sum = pairwise_reduce(data.n(), Eval::zero(d), [&](std::size_t i) {
    return obs_loglik_eval(params, data.obs(i), order);
  });
  sum *= 1.0 / static_cast<double>(data.n());
  return sum;
}

double full_loglik(const ParamVector& params, const Dataset& data) {
  return full_loglik_eval(params, data, 0).value;
}

Vec full_loglik_grad(const ParamVector& params, const Dataset& data) {
  return full_loglik_eval(params, data, 1).grad;
}

Mat full_loglik_hess(const ParamVector& params, const Dataset& data) {
  return full_loglik_eval(params, data, 2).hess;
}

Eval weighted_loglik_general_eval(const ParamVector& params, std::span<const WeightedDraw> draws,
                                  const Dataset& data, int order) {
  if (draws.empty()) throw ValidationError("need at least one draw");
  const double r = static_cast<double>(draws.size());
  const Eigen::Index d = static_cast<Eigen::Index>(params.dim());
  Eval sum = pairwise_reduce(draws.size(), Eval::zero(d), [&](std::size_t i) {
    const WeightedDraw& w = draws[i];
    if (!(w.prob > 0.0)) throw ZeroProbabilityDraw("draw has zero probability");
    Eval e = obs_loglik_eval(params, data.obs(w.index), order);
    e *= 1.0 / w.prob;
    return e;
  });
  sum *= 1.0 / r;
  return sum;
}

double weighted_loglik_general(const ParamVector& params, std::span<const WeightedDraw> draws,
                               const Dataset& data) {
  return weighted_loglik_general_eval(params, draws, data, 0).value;
}

Eval weighted_loglik_censoring_eval(const ParamVector& params,
                                    std::span<const WeightedDraw> draws,
                                    std::size_t n_uncensored, const Dataset& data, int order) {
  if (draws.size() <= n_uncensored)
    throw InsufficientSubsampleSize("censoring subsample needs r > n0");
  const Eigen::Index d = static_cast<Eigen::Index>(params.dim());
  return pairwise_reduce(draws.size(), Eval::zero(d), [&](std::size_t i) {
    const WeightedDraw& w = draws[i];
    if (i >= n_uncensored && !(w.prob > 0.0))
      throw ZeroProbabilityDraw("censored draw has zero probability");
    Eval e = obs_loglik_eval(params, data.obs(w.index), order);
    e *= w.weight;
    return e;
  });
}

double weighted_loglik_censoring(const ParamVector& params, std::span<const WeightedDraw> draws,
                                 std::size_t n_uncensored, const Dataset& data) {
  return weighted_loglik_censoring_eval(params, draws, n_uncensored, data, 0).value;
}

}  // namespace relsub
