#include "relsub/model.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>
#include <limits>

#include "relsub/errors.hpp"

namespace relsub {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (t/eta)^beta with derivatives in (beta, eta); the continuous extension at
// t = 0 is identically zero.
struct PowPieces {
  double z = 0.0;
  double db = 0.0, de = 0.0;
  double dbb = 0.0, dbe = 0.0, dee = 0.0;
};

PowPieces pow_pieces(double beta, double eta, double t, int order) {
  PowPieces p;
  if (t <= 0.0) return p;
  const double L = std::log(t / eta);
  p.z = std::exp(beta * L);
  if (order >= 1) {
    p.db = p.z * L;
    p.de = -beta * p.z / eta;
  }
  if (order >= 2) {
    p.dbb = p.z * L * L;
    p.dbe = -(p.z / eta) * (beta * L + 1.0);
    p.dee = beta * (beta + 1.0) * p.z / (eta * eta);
  }
  return p;
}

// log f of Weibull(beta, eta) at t > 0, with derivatives in (beta, eta).
struct WeibLogPdf {
  double value;
  double gb, ge;
  double hbb, hbe, hee;
};

WeibLogPdf weib_log_pdf(double beta, double eta, double t, const PowPieces& p, int order) {
  WeibLogPdf w{};
  const double L = std::log(t / eta);
  w.value = std::log(beta) - std::log(eta) + (beta - 1.0) * L - p.z;
  if (order >= 1) {
    w.gb = 1.0 / beta + L - p.db;
    w.ge = (beta / eta) * (p.z - 1.0);
  }
  if (order >= 2) {
    w.hbb = -1.0 / (beta * beta) - p.dbb;
    w.hbe = (p.z * (beta * L + 1.0) - 1.0) / eta;
    w.hee = beta / (eta * eta) - p.dee;
  }
  return w;
}

void require_finite_density(double v, const char* model) {
  if (!std::isfinite(v))
    throw NonFiniteDensity(std::string(model) + " log-density is not finite");
}

void require_finite(const Eval& e, const char* what) {
  if (!std::isfinite(e.value) || !e.grad.allFinite() || !e.hess.allFinite())
    throw NonFiniteValue(std::string(what) + " evaluation is not finite");
}

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

// Weibull density value at t = 0 as an extended real.
double weib_pdf_at_zero(double beta, double eta) {
  if (beta < 1.0) return kInf;
  if (beta > 1.0) return 0.0;
  return 1.0 / eta;
}

Eval exp_log_pdf(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(1);
  const double theta = params.values[0];
  e.value = std::log(theta) - theta * t;
  if (order >= 1) e.grad[0] = 1.0 / theta - t;
  if (order >= 2) e.hess(0, 0) = -1.0 / (theta * theta);
  return e;
}

Eval exp_log_surv(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(1);
  e.value = -params.values[0] * t;
  if (order >= 1) e.grad[0] = -t;
  return e;
}

Eval weib_log_surv(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(2);
  const PowPieces p = pow_pieces(params.values[0], params.values[1], t, order);
  e.value = -p.z;
  if (order >= 1) {
    e.grad[0] = -p.db;
    e.grad[1] = -p.de;
  }
  if (order >= 2) {
    e.hess(0, 0) = -p.dbb;
    e.hess(0, 1) = e.hess(1, 0) = -p.dbe;
    e.hess(1, 1) = -p.dee;
  }
  return e;
}

Eval weib_log_pdf_eval(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(2);
  const double beta = params.values[0];
  const double eta = params.values[1];
  if (t <= 0.0) {
    if (beta != 1.0) throw NonFiniteDensity("weibull log-density at t = 0 is not finite");
    if (order >= 1)
      throw NonFiniteValue("weibull log-density derivatives degenerate at t = 0");
    e.value = -std::log(eta);
    return e;
  }
  const PowPieces p = pow_pieces(beta, eta, t, order);
  const WeibLogPdf w = weib_log_pdf(beta, eta, t, p, order);
  e.value = w.value;
  if (order >= 1) {
    e.grad[0] = w.gb;
    e.grad[1] = w.ge;
  }
  if (order >= 2) {
    e.hess(0, 0) = w.hbb;
    e.hess(0, 1) = e.hess(1, 0) = w.hbe;
    e.hess(1, 1) = w.hee;
  }
  return e;
}

// Hessian of log(1 - pi_g F1) in (beta1, eta1). gradF = S1 * dz1 and
// d2F = S1 * (D2z1 - dz1 dz1'), both 2x2 blocks.
void glfp_log_mix_block(double pig, double s1, double a, const PowPieces& p1,
                        Eigen::Matrix2d& hess_out, Eigen::Vector2d& grad_out) {
  const Eigen::Vector2d dz1(p1.db, p1.de);
  Eigen::Matrix2d d2z1;
  d2z1 << p1.dbb, p1.dbe, p1.dbe, p1.dee;
  const Eigen::Vector2d gradF = s1 * dz1;
  const Eigen::Matrix2d d2F = s1 * (d2z1 - dz1 * dz1.transpose());
  grad_out = -pig * gradF / a;
  hess_out = -pig * d2F / a - (pig * pig) * (gradF * gradF.transpose()) / (a * a);
}

Eval glfp_log_surv(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(4);
  if (t <= 0.0) return e;
  const double pig = params.model.glfp_mixing;
  const PowPieces p1 = pow_pieces(params.values[0], params.values[1], t, std::max(order, 1));
  const PowPieces p2 = pow_pieces(params.values[2], params.values[3], t, order);
  const double s1 = std::exp(-p1.z);
  const double f1cdf = -std::expm1(-p1.z);
  const double a = 1.0 - pig * f1cdf;
  e.value = std::log1p(-pig * f1cdf) - p2.z;
  if (order >= 1) {
    Eigen::Vector2d g1;
    Eigen::Matrix2d h1;
    glfp_log_mix_block(pig, s1, a, p1, h1, g1);
    e.grad[0] = g1[0];
    e.grad[1] = g1[1];
    e.grad[2] = -p2.db;
    e.grad[3] = -p2.de;
    if (order >= 2) {
      e.hess.block<2, 2>(0, 0) = h1;
      e.hess(2, 2) = -p2.dbb;
      e.hess(2, 3) = e.hess(3, 2) = -p2.dbe;
      e.hess(3, 3) = -p2.dee;
    }
  }
  return e;
}

Eval glfp_log_pdf(const ParamVector& params, double t, int order) {
  Eval e = Eval::zero(4);
  const double pig = params.model.glfp_mixing;
  const double b1 = params.values[0], e1 = params.values[1];
  const double b2 = params.values[2], e2 = params.values[3];
  if (t <= 0.0) {
    // f(0) = pi_g f1(0) + f2(0), finite only when no component diverges.
    const double f10 = weib_pdf_at_zero(b1, e1);
    const double f20 = weib_pdf_at_zero(b2, e2);
    const double f0 = pig * f10 + f20;
    if (!std::isfinite(f0) || f0 <= 0.0)
      throw NonFiniteDensity("glfp log-density at t = 0 is not finite");
    if (order >= 1)
      throw NonFiniteValue("glfp log-density derivatives degenerate at t = 0");
    e.value = std::log(f0);
    return e;
  }
  const PowPieces p1 = pow_pieces(b1, e1, t, std::max(order, 1));
  const PowPieces p2 = pow_pieces(b2, e2, t, order);
  const WeibLogPdf w1 = weib_log_pdf(b1, e1, t, p1, order);
  const WeibLogPdf w2 = weib_log_pdf(b2, e2, t, p2, order);
  const double s1 = std::exp(-p1.z);
  const double f1cdf = -std::expm1(-p1.z);
  const double a = 1.0 - pig * f1cdf;

  // f = pi_g f1 S2 + f2 (1 - pi_g F1), assembled on the log scale.
  const double la1 = std::log(pig) + w1.value - p2.z;
  const double la2 = w2.value + std::log1p(-pig * f1cdf);
  e.value = logaddexp(la1, la2);
  if (order == 0) return e;

  const double wt1 = std::exp(la1 - e.value);
  const double wt2 = std::exp(la2 - e.value);

  Vec ga1 = Vec::Zero(4), ga2 = Vec::Zero(4);
  ga1[0] = w1.gb;
  ga1[1] = w1.ge;
  ga1[2] = -p2.db;
  ga1[3] = -p2.de;
  Eigen::Vector2d gmix;
  Eigen::Matrix2d hmix;
  glfp_log_mix_block(pig, s1, a, p1, hmix, gmix);
  ga2[0] = gmix[0];
  ga2[1] = gmix[1];
  ga2[2] = w2.gb;
  ga2[3] = w2.ge;
  e.grad = wt1 * ga1 + wt2 * ga2;

  if (order >= 2) {
    Mat ha1 = Mat::Zero(4, 4), ha2 = Mat::Zero(4, 4);
    ha1(0, 0) = w1.hbb;
    ha1(0, 1) = ha1(1, 0) = w1.hbe;
    ha1(1, 1) = w1.hee;
    ha1(2, 2) = -p2.dbb;
    ha1(2, 3) = ha1(3, 2) = -p2.dbe;
    ha1(3, 3) = -p2.dee;
    ha2.block<2, 2>(0, 0) = hmix;
    ha2(2, 2) = w2.hbb;
    ha2(2, 3) = ha2(3, 2) = w2.hbe;
    ha2(3, 3) = w2.hee;
    e.hess = wt1 * (ha1 + ga1 * ga1.transpose()) + wt2 * (ha2 + ga2 * ga2.transpose()) -
             e.grad * e.grad.transpose();
  }
  return e;
}

// No-throw survival value used by the MTTF quadrature.
double survival_value_raw(const ParamVector& params, double t) {
  switch (params.model.tag) {
    case ModelTag::Exponential:
      return std::exp(-params.values[0] * t);
    case ModelTag::Weibull: {
      const PowPieces p = pow_pieces(params.values[0], params.values[1], t, 0);
      return std::exp(-p.z);
    }
    case ModelTag::Glfp: {
      const PowPieces p1 = pow_pieces(params.values[0], params.values[1], t, 0);
      const PowPieces p2 = pow_pieces(params.values[2], params.values[3], t, 0);
      const double a = 1.0 + params.model.glfp_mixing * std::expm1(-p1.z);
      return a * std::exp(-p2.z);
    }
  }
  return 0.0;
}

double weib_inv_survival(double beta, double eta, double u_open) {
  // Solves exp(-(x/eta)^beta) = u for x.
  return eta * std::pow(-std::log(u_open), 1.0 / beta);
}

}  // namespace

std::size_t ModelKind::dim() const {
  switch (tag) {
    case ModelTag::Exponential:
      return 1;
    case ModelTag::Weibull:
      return 2;
    case ModelTag::Glfp:
      return 4;
  }
  return 0;
}

std::string ModelKind::name() const {
  switch (tag) {
    case ModelTag::Exponential:
      return "exponential";
    case ModelTag::Weibull:
      return "weibull";
    case ModelTag::Glfp:
      return "glfp";
  }
  return "?";
}

ModelKind ModelKind::parse(const std::string& name, double glfp_mixing) {
  ModelKind m;
  m.glfp_mixing = glfp_mixing;
  if (name == "exponential") {
    m.tag = ModelTag::Exponential;
  } else if (name == "weibull") {
    m.tag = ModelTag::Weibull;
  } else if (name == "glfp") {
    m.tag = ModelTag::Glfp;
    if (!(glfp_mixing > 0.0 && glfp_mixing < 1.0))
      throw ValidationError("glfp mixing probability must lie in (0,1)");
  } else {
    throw ValidationError("unknown model tag: " + name);
  }
  return m;
}

ParamVector::ParamVector(ModelKind m, Vec v) : model(m), values(std::move(v)) {
  if (static_cast<std::size_t>(values.size()) != model.dim())
    throw ValidationError("parameter vector has dimension " + std::to_string(values.size()) +
                          ", model " + model.name() + " needs " + std::to_string(model.dim()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (!(values[i] > 0.0) || !std::isfinite(values[i]))
      throw ValidationError("parameter components must be strictly positive and finite");
  if (model.tag == ModelTag::Glfp &&
      !(model.glfp_mixing > 0.0 && model.glfp_mixing < 1.0))
    throw ValidationError("glfp mixing probability must lie in (0,1)");
}

ParamVector ParamVector::ones(ModelKind m) {
  return ParamVector(m, Vec::Ones(static_cast<Eigen::Index>(m.dim())));
}

Eval log_pdf_eval(const ParamVector& params, double t, int order) {
  if (t < 0.0) throw ValidationError("time must be nonnegative");
  Eval e;
  switch (params.model.tag) {
    case ModelTag::Exponential:
      e = exp_log_pdf(params, t, order);
      break;
    case ModelTag::Weibull:
      e = weib_log_pdf_eval(params, t, order);
      break;
    case ModelTag::Glfp:
      e = glfp_log_pdf(params, t, order);
      break;
  }
  require_finite_density(e.value, params.model.name().c_str());
  if (order >= 1) require_finite(e, "log-density");
  return e;
}

Eval log_survival_eval(const ParamVector& params, double t, int order) {
  if (t < 0.0) throw ValidationError("time must be nonnegative");
  Eval e;
  switch (params.model.tag) {
    case ModelTag::Exponential:
      e = exp_log_surv(params, t, order);
      break;
    case ModelTag::Weibull:
      e = weib_log_surv(params, t, order);
      break;
    case ModelTag::Glfp:
      e = glfp_log_surv(params, t, order);
      break;
  }
  require_finite(e, "log-survival");
  return e;
}

double log_pdf(const ParamVector& params, double t) { return log_pdf_eval(params, t, 0).value; }

double log_survival(const ParamVector& params, double t) {
  return log_survival_eval(params, t, 0).value;
}

Vec grad_log_pdf(const ParamVector& params, double t) { return log_pdf_eval(params, t, 1).grad; }

Vec grad_log_survival(const ParamVector& params, double t) {
  return log_survival_eval(params, t, 1).grad;
}

Mat hess_log_pdf(const ParamVector& params, double t) { return log_pdf_eval(params, t, 2).hess; }

Mat hess_log_survival(const ParamVector& params, double t) {
  return log_survival_eval(params, t, 2).hess;
}

double mttf(const ParamVector& params) {
  switch (params.model.tag) {
    case ModelTag::Exponential:
      return 1.0 / params.values[0];
    case ModelTag::Weibull: {
      const double v = params.values[1] * std::tgamma(1.0 + 1.0 / params.values[0]);
      if (!std::isfinite(v)) throw IntegrationFailure("weibull mean overflows");
      return v;
    }
    case ModelTag::Glfp: {
      boost::math::quadrature::exp_sinh<double> integrator;
      double err = 0.0, l1 = 0.0;
      double q;
      try {
        q = integrator.integrate([&](double t) { return survival_value_raw(params, t); },
                                 1e-8, &err, &l1);
      } catch (const std::exception& ex) {
        throw IntegrationFailure(std::string("mttf quadrature failed: ") + ex.what());
      }
      if (!std::isfinite(q) || err > 1e-6 * std::max(l1, 1e-300))
        throw IntegrationFailure("mttf quadrature did not converge");
      return q;
    }
  }
  throw IntegrationFailure("unknown model");
}

double sample_lifetime(const ParamVector& params, RngStream& rng) {
  switch (params.model.tag) {
    case ModelTag::Exponential:
      return -std::log(rng.next_open()) / params.values[0];
    case ModelTag::Weibull:
      return weib_inv_survival(params.values[0], params.values[1], rng.next_open());
    case ModelTag::Glfp: {
      // Competing risks: component 1 is active with probability pi_g.
      const bool defect = rng.next_double() < params.model.glfp_mixing;
      const double t2 = weib_inv_survival(params.values[2], params.values[3], rng.next_open());
      if (!defect) return t2;
      const double t1 = weib_inv_survival(params.values[0], params.values[1], rng.next_open());
      return std::min(t1, t2);
    }
  }
  return 0.0;
}

ParamVector canonical_glfp(const ParamVector& params) {
  if (params.model.tag != ModelTag::Glfp || params.values[1] <= params.values[3]) return params;
  Vec v(4);
  v << params.values[2], params.values[3], params.values[0], params.values[1];
  return ParamVector(params.model, v);
}

}  // namespace relsub
