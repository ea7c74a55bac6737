#pragma once

#include <functional>

#include "relsub/model.hpp"
#include "relsub/types.hpp"

namespace relsub {

struct OptimizerConfig {
  int max_iters = 100;
  double grad_tol = 1e-8;     // max-norm of the gradient in log-parameter space
  double step_shrink = 0.5;   // backtracking factor, in (0,1)
  double min_step = 1e-12;

  void validate() const;
};

struct OptimResult {
  ParamVector theta_hat;
  int iterations = 0;
  bool converged = false;
  double final_grad_norm = 0.0;
  double objective = 0.0;
};

using Objective = std::function<Eval(const ParamVector&)>;

// Safeguarded Newton ascent on phi = log(theta) componentwise. The Newton
// step uses a Levenberg-style shift when the Hessian is not negative
// definite and falls back to gradient ascent; steps are accepted by a
// backtracking Armijo search, so the objective never decreases.
OptimResult maximize(const Objective& objective, const ParamVector& start,
                     const OptimizerConfig& config = {});

}  // namespace relsub
