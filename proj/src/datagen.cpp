#include "relsub/datagen.hpp"

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/reduce.hpp"

namespace relsub {

namespace {

constexpr int kUnitBudget = 100000;  // attempts per unit before giving up

}  // namespace

Observation generate_unit(const GenConfig& cfg, RngStream& rng, int want_class) {
  for (int attempt = 0; attempt < kUnitBudget; ++attempt) {
    const double til = rng.uniform(cfg.trunc_a, cfg.trunc_b);
    double x;
    if (cfg.truncation_mode == TruncationMode::Conditional) {
      // Lifetime conditional on surviving past the truncation age.
      x = sample_lifetime(cfg.true_params, rng);
      bool ok = x > til;
      int inner = 0;
      while (!ok && ++inner < kUnitBudget) {
        x = sample_lifetime(cfg.true_params, rng);
        ok = x > til;
      }
      if (!ok) break;
    } else {
      x = sample_lifetime(cfg.true_params, rng);
      if (x <= til) continue;  // regenerate the whole unit
    }
    const double z = rng.uniform(cfg.censor_c, cfg.censor_d);
    const bool censored = z < x;
    if (want_class >= 0 && censored != (want_class == 1)) continue;
    return {censored ? z : x, censored, til};
  }
  throw RejectionBudgetExceeded("unit generation rejected too often; check the windows");
}

void GenConfig::validate() const {
  if (n == 0) throw ValidationError("population size n must be positive");
  if (!(trunc_a >= 0.0 && trunc_a < trunc_b))
    throw ValidationError("truncation window needs 0 <= a < b");
  if (!(trunc_b <= censor_c && censor_c < censor_d))
    throw ValidationError("censoring window needs b <= c < d");
  if (fixed_n0 > n) throw ValidationError("fixed_n0 cannot exceed n");
  if (true_params.model.tag != model.tag)
    throw ValidationError("true_params model does not match the generator model");
}

Dataset generate(const GenConfig& config, const RngStream& rng) {
  config.validate();
  std::vector<double> t(config.n), trunc(config.n);
  std::vector<std::uint8_t> cens(config.n);
  parallel_for_each(config.n, [&](std::size_t i) {
    RngStream unit_rng = rng.fork(stage::kGenerate, i);
    int want = -1;
    if (config.fixed_n0 > 0) want = i < config.fixed_n0 ? 0 : 1;
    const Observation u = generate_unit(config, unit_rng, want);
    t[i] = u.t;
    cens[i] = u.censored ? 1 : 0;
    trunc[i] = u.t_trunc;
  });
  return Dataset::from_columns(std::move(t), std::move(cens), std::move(trunc));
}

std::pair<double, double> calibrate_alpha(ModelKind model, const ParamVector& true_params,
                                          double target_alpha,
                                          std::pair<double, double> trunc_window) {
  if (!(target_alpha > 0.0 && target_alpha < 1.0))
    throw ValidationError("target censoring rate must lie in (0,1)");
  const auto [a, b] = trunc_window;
  if (!(a >= 0.0 && a < b)) throw ValidationError("truncation window needs 0 <= a < b");

  const double scale = mttf(true_params);
  const RngStream probe_rng(0x43414c49u);  // fixed probe stream: calibration is deterministic

  auto alpha_at = [&](double s) {
    GenConfig cfg;
    cfg.model = model;
    cfg.true_params = true_params;
    cfg.n = 100000;
    cfg.trunc_a = a;
    cfg.trunc_b = b;
    cfg.censor_c = b + 0.25 * s * scale;
    cfg.censor_d = b + 1.25 * s * scale;
    return generate(cfg, probe_rng).alpha();
  };

  // Stop inside the +-0.005 contract, but proportionally tighter for extreme
  // rates where 0.005 would be coarser than the distance to the boundary.
  const double tol =
      std::min(0.005, std::max(3e-4, 0.1 * std::min(target_alpha, 1.0 - target_alpha)));

  // alpha(s) is nonincreasing in s (larger censoring ages censor less).
  double lo = 1e-9, hi = 1.0;
  if (alpha_at(lo) < target_alpha - tol)
    throw CalibrationFailed("target censoring rate unreachable with this truncation window");
  int expand = 0;
  while (alpha_at(hi) > target_alpha && ++expand <= 60) hi *= 2.0;
  if (expand > 60) throw CalibrationFailed("could not bracket the target censoring rate");

  double s = hi;
  for (int step = 0; step < 60; ++step) {
    s = 0.5 * (lo + hi);
    const double alpha = alpha_at(s);
    if (std::fabs(alpha - target_alpha) <= tol)
      return {b + 0.25 * s * scale, b + 1.25 * s * scale};
    (alpha > target_alpha ? lo : hi) = s;
  }
  throw CalibrationFailed("bisection did not reach the target censoring rate");
}

}  // namespace relsub
