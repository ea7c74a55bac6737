#include "relsub/optimizer.hpp"

#include <cmath>
#include <limits>

#include "relsub/errors.hpp"

namespace relsub {

namespace {

constexpr double kArmijo = 1e-4;

struct PhiEval {
  bool finite = false;
  double value = -std::numeric_limits<double>::infinity();
  Vec grad;  // gradient in phi
  Mat hess;  // Hessian in phi
};

ParamVector theta_from_phi(const ModelKind& model, const Vec& phi) {
  return ParamVector(model, phi.array().exp().matrix());
}

// Chain rule to log-space: g_phi = theta .* g, H_phi = D H D + diag(theta .* g)
// with D = diag(theta).
PhiEval eval_phi(const Objective& objective, const ModelKind& model, const Vec& phi) {
  PhiEval out;
  ParamVector theta = theta_from_phi(model, phi);
  Eval e;
  try {
    e = objective(theta);
  } catch (const NumericalError&) {
    return out;  // treated as -inf by the line search
  }
  if (!std::isfinite(e.value) || !e.grad.allFinite() || !e.hess.allFinite()) return out;
  const Eigen::Index d = phi.size();
  out.value = e.value;
  out.grad = theta.values.cwiseProduct(e.grad);
  out.hess = Mat::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k)
      out.hess(j, k) = theta.values[j] * theta.values[k] * e.hess(j, k);
  out.hess.diagonal() += out.grad;
  out.finite = true;
  return out;
}

// Ascent direction: solve (H - mu I) d = -g with mu grown until the shifted
// Hessian is negative definite (checked through the Cholesky factorization
// of its negation). Falls back to the raw gradient.
Vec ascent_direction(const Mat& hess, const Vec& grad) {
  const Eigen::Index d = grad.size();
  const double scale = std::max(1.0, hess.cwiseAbs().maxCoeff());
  double mu = 0.0;
  for (int attempt = 0; attempt < 40; ++attempt) {
    Mat a = -hess;
    a.diagonal().array() += mu;
    const Eigen::MatrixXd neg_shifted = a;
    Eigen::LLT<Eigen::MatrixXd> llt(neg_shifted);
    if (llt.info() == Eigen::Success) {
      const Eigen::VectorXd g = grad;
      Eigen::VectorXd dir = llt.solve(g);
      Vec dd = dir;
      if (dd.allFinite() && grad.dot(dd) > 0.0) return dd;
    }
    mu = (mu == 0.0) ? 1e-8 * scale : mu * 10.0;
    if (mu > 1e12 * scale) break;
  }
  return grad;
}

}  // namespace

void OptimizerConfig::validate() const {
  if (max_iters <= 0) throw ValidationError("max_iters must be positive");
  if (!(grad_tol > 0.0)) throw ValidationError("grad_tol must be positive");
  if (!(step_shrink > 0.0 && step_shrink < 1.0))
    throw ValidationError("step_shrink must lie in (0,1)");
  if (!(min_step > 0.0)) throw ValidationError("min_step must be positive");
}

OptimResult maximize(const Objective& objective, const ParamVector& start,
                     const OptimizerConfig& config) {
  config.validate();
  const ModelKind model = start.model;
  Vec phi = start.values.array().log().matrix();

  PhiEval cur = eval_phi(objective, model, phi);
  if (!cur.finite) throw ObjectiveNonFiniteAtStart();

  OptimResult res;
  res.converged = false;
  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    const double gnorm = cur.grad.cwiseAbs().maxCoeff();
    if (gnorm <= config.grad_tol) {
      res.converged = true;
      break;
    }

    Vec dir = ascent_direction(cur.hess, cur.grad);
    bool accepted = false;
    for (int pass = 0; pass < 2 && !accepted; ++pass) {
      const double slope = cur.grad.dot(dir);
      double step = 1.0;
      while (step >= config.min_step) {
        Vec cand = phi + step * dir;
        PhiEval next = eval_phi(objective, model, cand);
        if (next.finite && next.value > cur.value + kArmijo * step * slope) {
          phi = cand;
          cur = next;
          accepted = true;
          break;
        }
        step *= config.step_shrink;
      }
      if (!accepted) dir = cur.grad;  // retry once with steepest ascent
    }
    if (!accepted) {
      // Within rounding of the optimum the true improvement of a Newton step
      // can fall below the floating resolution of the objective. Take the
      // full step when it still shrinks the gradient without a measurable
      // objective loss; otherwise report the best iterate found.
      const double noise =
          64.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::fabs(cur.value));
      const Vec newton = ascent_direction(cur.hess, cur.grad);
      if (cur.grad.dot(newton) <= noise) {
        Vec cand = phi + newton;
        PhiEval next = eval_phi(objective, model, cand);
        if (next.finite && next.value >= cur.value - noise &&
            next.grad.cwiseAbs().maxCoeff() < cur.grad.cwiseAbs().maxCoeff()) {
          phi = cand;
          cur = next;
          accepted = true;
        }
      }
      if (!accepted) break;  // stalled
    }
  }

  res.iterations = iter;
  res.final_grad_norm = cur.grad.cwiseAbs().maxCoeff();
  res.converged = res.final_grad_norm <= config.grad_tol;
  res.objective = cur.value;
  res.theta_hat = theta_from_phi(model, phi);
  return res;
}

}  // namespace relsub
