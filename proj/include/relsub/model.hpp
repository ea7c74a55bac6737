#pragma once

#include <cstddef>
#include <string>

#include "relsub/rng.hpp"
#include "relsub/types.hpp"

namespace relsub {

enum class ModelTag { Exponential, Weibull, Glfp };

// Lifetime family selector. glfp_mixing is the fixed mixture probability of
// the first Weibull component; it is configuration, never estimated.
struct ModelKind {
  ModelTag tag = ModelTag::Exponential;
  double glfp_mixing = 0.054;

  std::size_t dim() const;
  std::string name() const;
  static ModelKind parse(const std::string& name, double glfp_mixing = 0.054);
};

// Model-tagged parameter vector. All components are strictly positive:
// exponential (theta); weibull (beta, eta); glfp (beta1, eta1, beta2, eta2).
struct ParamVector {
  ModelKind model;
  Vec values;

  ParamVector() = default;
  ParamVector(ModelKind m, Vec v);
  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }

  static ParamVector ones(ModelKind m);
};

double log_pdf(const ParamVector& params, double t);
double log_survival(const ParamVector& params, double t);
Vec grad_log_pdf(const ParamVector& params, double t);
Vec grad_log_survival(const ParamVector& params, double t);
Mat hess_log_pdf(const ParamVector& params, double t);
Mat hess_log_survival(const ParamVector& params, double t);

// Fused value/gradient/Hessian evaluation; order is the highest derivative
// needed (0, 1 or 2). The aggregate kernels go through these.
Eval log_pdf_eval(const ParamVector& params, double t, int order);
Eval log_survival_eval(const ParamVector& params, double t, int order);

// Mean time to failure: closed form for exponential and Weibull, adaptive
// quadrature of the survival function for GLFP (relative tolerance 1e-8).
double mttf(const ParamVector& params);

// One lifetime draw by inverse cdf (exponential, Weibull) or the
// competing-risk representation (GLFP).
double sample_lifetime(const ParamVector& params, RngStream& rng);

// GLFP reporting convention: order components so eta1 <= eta2. Identity for
// the other models.
ParamVector canonical_glfp(const ParamVector& params);

}  // namespace relsub
