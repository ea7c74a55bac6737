#include <doctest.h>

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/model.hpp"
#include "support/oracles.hpp"

using namespace relsub;
using oracles::rel_close;

namespace {

ParamVector make(ModelTag tag, std::initializer_list<double> vals, double pig = 0.054) {
  ModelKind m;
  m.tag = tag;
  m.glfp_mixing = pig;
  Vec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (double x : vals) v[i++] = x;
  return ParamVector(m, v);
}

}  // namespace

TEST_CASE("log_pdf matches hand values") {
  CHECK(log_pdf(make(ModelTag::Exponential, {1.0}), 0.0) == doctest::Approx(0.0));
  CHECK(log_pdf(make(ModelTag::Weibull, {2.0, 1.0}), 1.0) ==
        doctest::Approx(std::log(2.0) - 1.0));
  // GLFP at t = 0 with both shapes 1: log(pi_g * 1 * 1 + 1 * (1 - 0)).
  CHECK(log_pdf(make(ModelTag::Glfp, {1.0, 1.0, 1.0, 1.0}), 0.0) ==
        doctest::Approx(std::log(1.054)));
}

TEST_CASE("log_survival matches hand values") {
  CHECK(log_survival(make(ModelTag::Exponential, {0.5}), 2.0) == doctest::Approx(-1.0));
  CHECK(log_survival(make(ModelTag::Weibull, {2.0, 3.0}), 3.0) == doctest::Approx(-1.0));
  const double expect = std::log((1.0 - 0.054 * (1.0 - std::exp(-1.0))) * std::exp(-1.0));
  CHECK(log_survival(make(ModelTag::Glfp, {1.0, 1.0, 1.0, 1.0}), 1.0) ==
        doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("survival boundary and degenerate densities") {
  CHECK(log_survival(make(ModelTag::Weibull, {2.0, 3.0}), 0.0) == 0.0);
  CHECK(log_survival(make(ModelTag::Glfp, {2.0, 3.0, 1.5, 2.0}), 0.0) == 0.0);
  CHECK(log_pdf(make(ModelTag::Weibull, {1.0, 4.0}), 0.0) == doctest::Approx(-std::log(4.0)));
  CHECK_THROWS_AS((void)log_pdf(make(ModelTag::Weibull, {2.0, 1.0}), 0.0), NonFiniteDensity);
  CHECK_THROWS_AS((void)log_pdf(make(ModelTag::Weibull, {0.5, 1.0}), 0.0), NonFiniteDensity);
  CHECK_THROWS_AS((void)log_pdf(make(ModelTag::Glfp, {2.0, 1.0, 3.0, 1.0}), 0.0),
                  NonFiniteDensity);
}

TEST_CASE("gradients match hand values") {
  Vec g = grad_log_pdf(make(ModelTag::Exponential, {2.0}), 1.0);
  CHECK(g[0] == doctest::Approx(-0.5));

  g = grad_log_survival(make(ModelTag::Exponential, {0.7}), 3.0);
  CHECK(g[0] == doctest::Approx(-3.0));

  g = grad_log_survival(make(ModelTag::Weibull, {2.0, 1.0}), 1.0);
  CHECK(g[0] == doctest::Approx(0.0));
  CHECK(g[1] == doctest::Approx(2.0));

  g = grad_log_survival(make(ModelTag::Glfp, {1.5, 2.0, 2.0, 3.0}), 0.0);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("hessians match hand values") {
  Mat h = hess_log_pdf(make(ModelTag::Exponential, {2.0}), 17.0);
  CHECK(h(0, 0) == doctest::Approx(-0.25));
  h = hess_log_survival(make(ModelTag::Exponential, {2.0}), 17.0);
  CHECK(h(0, 0) == 0.0);
}

TEST_CASE("derivatives agree with finite differences across models") {
  RngStream rng(2024);
  for (ModelTag tag : {ModelTag::Exponential, ModelTag::Weibull, ModelTag::Glfp}) {
    ModelKind model;
    model.tag = tag;
    for (int rep = 0; rep < 25; ++rep) {
      const ParamVector theta = oracles::random_params(model, rng);
      const double t = rng.uniform(0.05, 50.0);

      for (bool survival : {false, true}) {
        auto value = [&](const Vec& v) {
          ParamVector p(model, v);
          return survival ? log_survival(p, t) : log_pdf(p, t);
        };
        auto grad = [&](const Vec& v) {
          ParamVector p(model, v);
          return survival ? grad_log_survival(p, t) : grad_log_pdf(p, t);
        };
        const Vec g = grad(theta.values);
        const Vec g_fd = oracles::fd_grad(value, theta.values);
        for (Eigen::Index k = 0; k < g.size(); ++k)
          CHECK(rel_close(g[k], g_fd[k], 1e-5));

        const Mat h =
            survival ? hess_log_survival(theta, t) : hess_log_pdf(theta, t);
        const Mat h_fd = oracles::fd_jacobian_sym(grad, theta.values);
        for (Eigen::Index a = 0; a < h.rows(); ++a)
          for (Eigen::Index b = 0; b < h.cols(); ++b)
            CHECK(rel_close(h(a, b), h_fd(a, b), 1e-4));
      }
    }
  }
}

TEST_CASE("survival is nonincreasing with S(0) = 1") {
  RngStream rng(7);
  for (ModelTag tag : {ModelTag::Exponential, ModelTag::Weibull, ModelTag::Glfp}) {
    ModelKind model;
    model.tag = tag;
    const ParamVector theta = oracles::random_params(model, rng);
    double prev = std::exp(log_survival(theta, 0.0));
    CHECK(prev == 1.0);
    for (int i = 1; i <= 1000; ++i) {
      const double s = std::exp(log_survival(theta, 20.0 * i / 1000.0));
      CHECK(s <= prev + 1e-15);
      prev = s;
    }
  }
}

TEST_CASE("glfp closed-form survival matches quadrature of the density") {
  const ParamVector theta = make(ModelTag::Glfp, {1.2, 2.5, 2.0, 3.0});
  for (double t : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 14.0, 20.0}) {
    const double s_closed = std::exp(log_survival(theta, t));
    const double s_quad = 1.0 - oracles::cdf_by_quadrature(theta, t);
    CHECK(std::fabs(s_closed - s_quad) <= 1e-7);
  }
}

TEST_CASE("density equals the time derivative of the cdf") {
  RngStream rng(99);
  for (ModelTag tag : {ModelTag::Exponential, ModelTag::Weibull, ModelTag::Glfp}) {
    ModelKind model;
    model.tag = tag;
    const ParamVector theta = oracles::random_params(model, rng);
    for (double t : {0.4, 0.9, 1.7, 3.1}) {
      const double h = 1e-6 * (1.0 + t);
      const double dS = (std::exp(log_survival(theta, t + h)) -
                         std::exp(log_survival(theta, t - h))) /
                        (2.0 * h);
      CHECK(rel_close(log_pdf(theta, t), std::log(-dS), 1e-5));
    }
  }
}

TEST_CASE("mttf closed forms and quadrature") {
  CHECK(mttf(make(ModelTag::Exponential, {0.5})) == doctest::Approx(2.0));
  CHECK(mttf(make(ModelTag::Weibull, {1.0, 4.0})) == doctest::Approx(4.0));
  CHECK(mttf(make(ModelTag::Weibull, {2.0, 1.0})) ==
        doctest::Approx(0.8862269254527580).epsilon(1e-10));

  // GLFP: compare against an independent finite-interval quadrature.
  const ParamVector glfp = make(ModelTag::Glfp, {1.0, 2.0, 2.0, 3.0});
  boost::math::quadrature::tanh_sinh<double> integ;
  const double upto = integ.integrate(
      [&](double t) { return std::exp(log_survival(glfp, t)); }, 0.0, 200.0);
  CHECK(mttf(glfp) == doctest::Approx(upto).epsilon(1e-7));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make(ModelTag::Weibull, {1.0}), ValidationError);
  CHECK_THROWS_AS(make(ModelTag::Weibull, {1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(make(ModelTag::Glfp, {1, 1, 1, 1}, 1.5), ValidationError);
  CHECK_THROWS_AS(ModelKind::parse("gamma"), ValidationError);
  CHECK(ModelKind::parse("weibull").dim() == 2);
}

TEST_CASE("glfp canonical ordering swaps components") {
  const ParamVector p = make(ModelTag::Glfp, {1.5, 4.0, 2.0, 3.0});
  const ParamVector c = canonical_glfp(p);
  CHECK(c.values[0] == 2.0);
  CHECK(c.values[1] == 3.0);
  CHECK(c.values[2] == 1.5);
  CHECK(c.values[3] == 4.0);
  const ParamVector sorted = make(ModelTag::Glfp, {1.5, 3.0, 2.0, 4.0});
  CHECK(canonical_glfp(sorted).values == sorted.values);
}

TEST_CASE("lifetime sampling matches the model cdf") {
  RngStream rng(5);
  const ParamVector glfp = make(ModelTag::Glfp, {1.0, 2.0, 2.0, 3.0});
  const int n = 200000;
  for (double t : {0.5, 1.5, 3.0}) {
    int count = 0;
    RngStream local = rng.fork(static_cast<std::uint64_t>(t * 100));
    for (int i = 0; i < n; ++i)
      if (sample_lifetime(glfp, local) <= t) ++count;
    const double emp = static_cast<double>(count) / n;
    const double truth = 1.0 - std::exp(log_survival(glfp, t));
    CHECK(std::fabs(emp - truth) < 3.0 * std::sqrt(truth * (1 - truth) / n) + 1e-4);
  }
}
