#pragma once

#include <cstdint>
#include <utility>

#include "relsub/data.hpp"
#include "relsub/model.hpp"
#include "relsub/rng.hpp"

namespace relsub {

enum class TruncationMode { Conditional, Independent };

// Synthetic censored/truncated data: truncation ages from U(a, b), lifetimes
// from the model, censoring ages from U(c, d), with a < b <= c < d.
struct GenConfig {
  ModelKind model;
  ParamVector true_params;
  std::size_t n = 0;
  double trunc_a = 0.0, trunc_b = 0.0;
  double censor_c = 0.0, censor_d = 0.0;
  TruncationMode truncation_mode = TruncationMode::Conditional;
  std::uint64_t seed = 0;
  // When nonzero, the first fixed_n0 units are conditioned to be uncensored
  // and the rest censored, mirroring studies that pin the complete-data count.
  std::size_t fixed_n0 = 0;

  void validate() const;
};

// Per-unit child RNG streams make the result independent of thread count and
// identical for a given (config, rng) regardless of execution order.
Dataset generate(const GenConfig& config, const RngStream& rng);
inline Dataset generate(const GenConfig& config) { return generate(config, RngStream(config.seed)); }

// One unit from its own stream. want_class: -1 unconstrained, 0 force
// uncensored, 1 force censored (rejection keeps the conditional law). Shared
// by the parallel generator and the serial reference.
Observation generate_unit(const GenConfig& config, RngStream& unit_rng, int want_class);

// Bisection on the scale of the censoring window until the simulated
// censoring rate of an n = 1e5 probe lands within +-0.005 of the target.
std::pair<double, double> calibrate_alpha(ModelKind model, const ParamVector& true_params,
                                          double target_alpha,
                                          std::pair<double, double> trunc_window);

}  // namespace relsub
