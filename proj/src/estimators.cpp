#include "relsub/estimators.hpp"

#include <chrono>
#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/sampling.hpp"

namespace relsub {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool any_uncensored(const Dataset& data, const std::vector<WeightedDraw>& draws) {
  for (const WeightedDraw& w : draws)
    if (!data.censored(w.index)) return true;
  return false;
}

// All estimator objectives are normalized by n so the gradient tolerance is
// on the mean-log-likelihood scale regardless of dataset size; argmax is
// unchanged.
Objective general_objective(const Dataset& data, const std::vector<WeightedDraw>& draws) {
  const double inv_n = 1.0 / static_cast<double>(data.n());
  return [&data, &draws, inv_n](const ParamVector& p) {
    Eval e = weighted_loglik_general_eval(p, draws, data, 2);
    e *= inv_n;
    return e;
  };
}

Objective censoring_objective(const Dataset& data, const std::vector<WeightedDraw>& draws,
                              std::size_t n_uncensored) {
  const double inv_n = 1.0 / static_cast<double>(data.n());
  return [&data, &draws, n_uncensored, inv_n](const ParamVector& p) {
    Eval e = weighted_loglik_censoring_eval(p, draws, n_uncensored, data, 2);
    e *= inv_n;
    return e;
  };
}

// GLFP estimates are reported with eta1 <= eta2. A label swap is not an exact
// symmetry of the family (pi_g breaks it), so after swapping we re-run the
// maximizer from the swapped point instead of reporting it directly.
OptimResult canonical_result(const Objective& obj, OptimResult res,
                             const OptimizerConfig& opt) {
  ParamVector canon = canonical_glfp(res.theta_hat);
  if (canon.values == res.theta_hat.values) return res;
  try {
    return maximize(obj, canon, opt);
  } catch (const NumericalError&) {
    return res;
  }
}

// Uniform pilot with one retry at doubled size.
struct PilotFit {
  OptimResult fit;
  std::size_t size_used = 0;
};

PilotFit pilot_estimate(const Dataset& data, ModelKind model, std::size_t r0,
                        const OptimizerConfig& opt, const RngStream& rng) {
  const ProbVector unif = uniform_probs(data);
  const std::uint64_t tags[2] = {stage::kPilot, stage::kPilotRetry};
  std::string last = "no uncensored unit in the pilot draws";
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::size_t size = r0 << attempt;
    RngStream stream = rng.fork(tags[attempt]);
    std::vector<WeightedDraw> draws = draw_with_replacement(unif, size, stream);
    if (!any_uncensored(data, draws)) continue;
    try {
      OptimResult res = maximize(general_objective(data, draws), ParamVector::ones(model), opt);
      if (res.converged) return {res, size};
      last = "pilot optimization did not converge";
    } catch (const NumericalError& ex) {
      last = ex.what();
    }
  }
  throw PilotFailed("pilot estimation failed: " + last);
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Full:
      return "full";
    case Method::Uniform:
      return "uniform";
    case Method::Rds:
      return "rds";
    case Method::Rdcs:
      return "rdcs";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "full") return Method::Full;
  if (name == "uniform") return Method::Uniform;
  if (name == "rds") return Method::Rds;
  if (name == "rdcs") return Method::Rdcs;
  throw ValidationError("unknown method: " + name);
}

void EstimatorSpec::validate() const {
  optimizer.validate();
  if (method == Method::Full) return;
  if (r == 0) throw ValidationError("subsample size r must be positive");
  if (method == Method::Rds || method == Method::Rdcs) {
    if (r0 == 0) throw ValidationError("pilot size r0 must be positive");
    if (r0 >= r) throw ValidationError("pilot size r0 must be smaller than r");
    if (!(xi >= 0.0 && xi <= 1.0)) throw ValidationError("xi must lie in [0,1]");
  }
}

EstimateReport full_mle(const Dataset& data, ModelKind model, const OptimizerConfig& opt) {
  const auto t0 = Clock::now();
  if (data.empty()) throw EmptyDataset();
  if (data.n0() == 0) throw NoUncensoredData();
  Objective obj = [&data](const ParamVector& p) { return full_loglik_eval(p, data, 2); };
  OptimResult res = maximize(obj, ParamVector::ones(model), opt);
  res = canonical_result(obj, std::move(res), opt);

  EstimateReport rep;
  rep.method = Method::Full;
  rep.theta_tilde = res.theta_hat;
  rep.draws_used = {data.n()};
  rep.converged = res.converged;
  rep.iterations = res.iterations;
  rep.final_grad_norm = res.final_grad_norm;
  rep.wall_time = seconds_since(t0);
  return rep;
}

EstimateReport uniform_estimate(const Dataset& data, ModelKind model, std::size_t r,
                                const OptimizerConfig& opt, RngStream rng) {
  const auto t0 = Clock::now();
  if (data.empty()) throw EmptyDataset();
  RngStream stream = rng.fork(stage::kMainDraw);
  std::vector<WeightedDraw> draws = draw_with_replacement(uniform_probs(data), r, stream);
  if (!any_uncensored(data, draws)) throw NoUncensoredDraws();

  Objective obj = general_objective(data, draws);
  OptimResult res = maximize(obj, ParamVector::ones(model), opt);
  res = canonical_result(obj, std::move(res), opt);

  EstimateReport rep;
  rep.method = Method::Uniform;
  rep.theta_tilde = res.theta_hat;
  rep.cov = var_rds(draws, data, res.theta_hat, r);
  rep.draws_used = {r};
  rep.converged = res.converged;
  rep.iterations = res.iterations;
  rep.final_grad_norm = res.final_grad_norm;
  rep.wall_time = seconds_since(t0);
  return rep;
}

EstimateReport rds_estimate(const Dataset& data, ModelKind model, std::size_t r, std::size_t r0,
                            double xi, const OptimizerConfig& opt, RngStream rng) {
  const auto t0 = Clock::now();
  if (data.empty()) throw EmptyDataset();
  if (r0 == 0 || r0 >= r) throw ValidationError("need 0 < r0 < r");

  PilotFit pilot = pilot_estimate(data, model, r0, opt, rng);
  const ParamVector& theta_p = pilot.fit.theta_hat;

  ProbVector probs = mix_probs(rds_probs(data, theta_p), xi);
  RngStream stream = rng.fork(stage::kMainDraw);
  std::vector<WeightedDraw> draws = draw_with_replacement(probs, r, stream);

  Objective obj = general_objective(data, draws);
  OptimResult res = maximize(obj, theta_p, opt);
  res = canonical_result(obj, std::move(res), opt);

  EstimateReport rep;
  rep.method = Method::Rds;
  rep.theta_tilde = res.theta_hat;
  rep.cov = var_rds(draws, data, res.theta_hat, r);
  rep.pilot_theta = theta_p;
  rep.draws_used = {pilot.size_used, r};
  rep.converged = res.converged;
  rep.iterations = res.iterations;
  rep.final_grad_norm = res.final_grad_norm;
  rep.wall_time = seconds_since(t0);
  return rep;
}

EstimateReport rdcs_estimate(const Dataset& data, ModelKind model, std::size_t r, std::size_t r0,
                             double xi_c, const OptimizerConfig& opt, RngStream rng) {
  const auto t0 = Clock::now();
  if (data.empty()) throw EmptyDataset();
  if (data.n1() == 0) throw NoCensoredUnits();
  if (r <= data.n0())
    throw SubsampleTooSmall("censoring subsampling needs r > n0 = " +
                            std::to_string(data.n0()));

  // The exponential probabilities do not involve theta, so the pilot draw is
  // skipped and the optimizer starts from ones.
  std::optional<PilotFit> pilot;
  ParamVector start = ParamVector::ones(model);
  if (model.tag != ModelTag::Exponential) {
    pilot = pilot_estimate(data, model, r0, opt, rng);
    start = pilot->fit.theta_hat;
  }

  ProbVector probs = mix_probs(rdcs_probs(data, start), xi_c);
  const std::size_t n0 = data.n0();
  const std::size_t r_cens = r - n0;
  RngStream stream = rng.fork(stage::kMainDraw);
  std::vector<WeightedDraw> cens_draws = draw_with_replacement(probs, r_cens, stream);

  std::vector<WeightedDraw> draws;
  draws.reserve(r);
  for (std::size_t i = 0; i < data.n(); ++i)
    if (!data.censored(i)) draws.push_back({static_cast<std::uint32_t>(i), 1.0, 1.0});
  // draw_with_replacement already filled weight = 1/((r - n0) * prob).
  draws.insert(draws.end(), cens_draws.begin(), cens_draws.end());

  Objective obj = censoring_objective(data, draws, n0);
  OptimResult res = maximize(obj, start, opt);
  res = canonical_result(obj, std::move(res), opt);

  EstimateReport rep;
  rep.method = Method::Rdcs;
  rep.theta_tilde = res.theta_hat;
  rep.cov = var_rdcs(draws, n0, data, res.theta_hat, r);
  if (pilot) rep.pilot_theta = pilot->fit.theta_hat;
  rep.draws_used = {n0, r_cens};
  rep.converged = res.converged;
  rep.iterations = res.iterations;
  rep.final_grad_norm = res.final_grad_norm;
  rep.wall_time = seconds_since(t0);
  return rep;
}

EstimateReport run_estimator(const Dataset& data, ModelKind model, const EstimatorSpec& spec,
                             RngStream rng) {
  spec.validate();
  switch (spec.method) {
    case Method::Full:
      return full_mle(data, model, spec.optimizer);
    case Method::Uniform:
      return uniform_estimate(data, model, spec.r, spec.optimizer, rng);
    case Method::Rds:
      return rds_estimate(data, model, spec.r, spec.r0, spec.xi, spec.optimizer, rng);
    case Method::Rdcs:
      return rdcs_estimate(data, model, spec.r, spec.r0, spec.xi, spec.optimizer, rng);
  }
  throw ValidationError("unknown method");
}

}  // namespace relsub
