#include "relsub/reference.hpp"

#include "relsub/errors.hpp"

namespace relsub::ref {

Eval full_loglik_eval(const ParamVector& params, const Dataset& data, int order) {
  if (data.empty()) throw EmptyDataset();
  const Eigen::Index d = static_cast<Eigen::Index>(params.dim());
  Eval sum = Eval::zero(d);
  for (std::size_t i = 0; i < data.n(); ++i)
    sum += obs_loglik_eval(params, data.obs(i), order);
  sum *= 1.0 / static_cast<double>(data.n());
  return sum;
}

std::vector<double> rds_score_norms(const Dataset& data, const ParamVector& theta) {
  std::vector<double> norms(data.n());
  for (std::size_t i = 0; i < data.n(); ++i)
    norms[i] = obs_loglik_eval(theta, data.obs(i), 1).grad.norm();
  return norms;
}

Dataset generate(const GenConfig& config, const RngStream& rng) {
  config.validate();
  std::vector<Observation> obs(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    RngStream unit_rng = rng.fork(stage::kGenerate, i);
    int want = -1;
    if (config.fixed_n0 > 0) want = i < config.fixed_n0 ? 0 : 1;
    obs[i] = generate_unit(config, unit_rng, want);
  }
  return Dataset(obs);
}

}  // namespace relsub::ref
