#include <doctest.h>

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/uncertainty.hpp"
#include "support/oracles.hpp"

using namespace relsub;
using oracles::rel_close;

namespace {

ParamVector expo(double theta) {
  Vec v(1);
  v << theta;
  return ParamVector(ModelKind::parse("exponential"), v);
}

ParamVector weib(double beta, double eta) {
  Vec v(2);
  v << beta, eta;
  return ParamVector(ModelKind::parse("weibull"), v);
}

ProbVector all_units(std::vector<double> p) {
  ProbVector out;
  out.support = Support::AllUnits;
  out.probs = std::move(p);
  return out;
}

}  // namespace

TEST_CASE("var_rds scalar hand oracle") {
  // Two draws with prob 1/2 on exponential theta=2: scores (-0.5, -1.0),
  // hessians (-0.25, 0). With gamma off:
  //   M = (1/(n*2)) * (2*(-0.25) + 2*0)        = -0.25/n
  //   Lam = (1/(n^2*2)) * (4*0.25 + 4*1.0)     = 2.5/n^2
  //   V = Lam / M^2                            = 40 for any n.
  const Dataset data({{1.0, false, 0.0}, {1.0, true, 0.0}});
  std::vector<WeightedDraw> draws{{0, 0.5, 1.0}, {1, 0.5, 1.0}};
  const CovReport rep = var_rds(draws, data, expo(2.0), 2, false);
  CHECK(rep.m_hat(0, 0) == doctest::Approx(-0.125));
  CHECK(rep.lambda_hat(0, 0) == doctest::Approx(0.625));
  CHECK(rep.v_hat(0, 0) == doctest::Approx(40.0));
  CHECK(rep.ese[0] == doctest::Approx(std::sqrt(40.0 / 2.0)));
  CHECK(rep.gamma == 0.0);
}

TEST_CASE("var_rds collapse case: repeated draws of one unit") {
  const Dataset data({{1.0, false, 0.0}, {2.0, true, 0.0}});
  const ParamVector th = expo(2.0);
  const double pi = 0.5;
  std::vector<WeightedDraw> draws(4, WeightedDraw{0, pi, 0.0});
  const CovReport rep = var_rds(draws, data, th, 4, false);
  const double h = obs_hessian(th, data.obs(0))(0, 0);
  const double s = obs_score(th, data.obs(0))[0];
  const double m_expect = 4.0 * (h / pi) / (2.0 * 4.0);
  const double l_expect = 4.0 * (s * s / (pi * pi)) / (4.0 * 4.0);
  CHECK(rep.m_hat(0, 0) == doctest::Approx(m_expect));
  CHECK(rep.lambda_hat(0, 0) == doctest::Approx(l_expect));
  CHECK(rep.v_hat(0, 0) == doctest::Approx(l_expect / (m_expect * m_expect)));
}

TEST_CASE("gamma terms are negligible when r/n is tiny") {
  RngStream rng(21);
  const Dataset data = oracles::random_dataset(5000, rng);
  const ParamVector th = expo(1.0);
  const ProbVector probs = rds_probs(data, th);
  RngStream draw_rng(3);
  const auto draws = draw_with_replacement(probs, 5, draw_rng);
  const CovReport with = var_rds(draws, data, th, 5, true);
  const CovReport without = var_rds(draws, data, th, 5, false);
  CHECK(with.gamma == doctest::Approx(0.001));
  CHECK(rel_close(with.v_hat(0, 0), without.v_hat(0, 0), 5e-3));
}

TEST_CASE("var_rdcs hand cases") {
  // A censored draw at its truncation age has zero score: Lambda collapses.
  const Dataset d0({{1.0, false, 0.0}, {2.0, true, 2.0}});
  std::vector<WeightedDraw> draws0{{0, 1.0, 1.0}, {1, 1.0, 1.0}};
  const CovReport rep0 = var_rdcs(draws0, 1, d0, expo(1.0), 2, false);
  CHECK(rep0.lambda_hat(0, 0) == doctest::Approx(0.0));

  // Scalar exponential, two censored draws: evaluate the display by hand.
  //   n=3, n0=1, r=3, probs (0.25, 0.75), scores -(t - t_il) = (-2, -1).
  const Dataset d1({{0.5, false, 0.0}, {2.0, true, 0.0}, {1.5, true, 0.5}});
  const ParamVector th = expo(0.8);
  const double w1 = 1.0 / (2.0 * 0.25), w2 = 1.0 / (2.0 * 0.75);
  std::vector<WeightedDraw> draws1{{0, 1.0, 1.0}, {1, 0.25, w1}, {2, 0.75, w2}};
  const CovReport rep1 = var_rdcs(draws1, 1, d1, th, 3, false);

  const double n = 3.0, r = 3.0;
  const double h0 = obs_hessian(th, d1.obs(0))(0, 0);  // -1/theta^2, weight 1
  const double m_expect = (1.0 * h0 + w1 * 0.0 + w2 * 0.0) / n;
  CHECK(rep1.m_hat(0, 0) == doctest::Approx(m_expect));
  const double s1 = -2.0, s2 = -1.0;
  const double lam_first = (s1 * s1 / (0.25 * 0.25) + s2 * s2 / (0.75 * 0.75)) / (n * n * r);
  const double mean_term = (s1 / 0.25 + s2 / 0.75) / (n * r);
  CHECK(rep1.lambda_hat(0, 0) == doctest::Approx(lam_first - mean_term * mean_term));
}

TEST_CASE("oracle covariance with uniform probabilities") {
  const Dataset data({{1.0, false, 0.0}, {2.0, true, 0.5}, {0.7, false, 0.2}});
  const ParamVector th = expo(1.2);
  const ProbVector unif = all_units({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const CovReport rep = oracle_cov_general(data, th, unif);
  double lam = 0.0, m = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double s = obs_score(th, data.obs(i))[0];
    lam += s * s;
    m += obs_hessian(th, data.obs(i))(0, 0);
  }
  lam /= 3.0;  // (1/n^2) * sum n * s^2
  m /= 3.0;
  CHECK(rep.lambda_hat(0, 0) == doctest::Approx(lam));
  CHECK(rep.m_hat(0, 0) == doctest::Approx(m));
  CHECK(rep.v_hat(0, 0) == doctest::Approx(lam / (m * m)));
}

TEST_CASE("remark bounds: mixing inflates the trace by at most 1/(1-xi)") {
  RngStream rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    const Dataset data = oracles::random_dataset(60, rng);
    const ParamVector th = weib(1.6, 2.1);
    const ProbVector opt = rds_probs(data, th);
    const double t_opt = oracle_cov_general(data, th, opt).lambda_hat.trace();
    for (double xi : {0.1, 0.3}) {
      const double t_mix =
          oracle_cov_general(data, th, mix_probs(opt, xi)).lambda_hat.trace();
      CHECK(t_opt <= t_mix * (1.0 + 1e-10));
      CHECK(t_mix <= t_opt / (1.0 - xi) * (1.0 + 1e-10));
    }

    const ProbVector copt = rdcs_probs(data, th);
    const double c_opt = oracle_cov_censoring(data, th, copt).lambda_hat.trace();
    for (double xi : {0.1, 0.3}) {
      const double c_mix =
          oracle_cov_censoring(data, th, mix_probs(copt, xi)).lambda_hat.trace();
      // The mean correction is probability-free, so compare the pi-dependent parts.
      Vec mean = Vec::Zero(2);
      for (std::uint32_t i : data.censored_indices()) {
        Vec g = grad_log_survival(th, data.time(i));
        if (data.trunc(i) > 0.0) g -= grad_log_survival(th, data.trunc(i));
        mean += g;
      }
      const double shift = (mean / static_cast<double>(data.n())).squaredNorm();
      const double a_opt = c_opt + shift, a_mix = c_mix + shift;
      CHECK(a_opt <= a_mix * (1.0 + 1e-10));
      CHECK(a_mix <= a_opt / (1.0 - xi) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("var_rds concentrates on the oracle covariance") {
  RngStream rng(33);
  const Dataset data = oracles::random_dataset(400, rng);
  const ParamVector th = expo(0.9);
  const ProbVector probs = mix_probs(rds_probs(data, th), 0.1);
  const CovReport oracle = oracle_cov_general(data, th, probs);

  const int sets = 300;
  const std::size_t r = 200;
  double mean_v = 0.0;
  RngStream draw_rng(12);
  for (int s = 0; s < sets; ++s) {
    const auto draws = draw_with_replacement(probs, r, draw_rng);
    mean_v += var_rds(draws, data, th, r, false).v_hat(0, 0);
  }
  mean_v /= sets;
  CHECK(rel_close(mean_v, oracle.v_hat(0, 0), 0.1));
}

TEST_CASE("sandwich is symmetric and errors are surfaced") {
  RngStream rng(2);
  const Dataset data = oracles::random_dataset(50, rng);
  const ParamVector th = weib(1.5, 2.5);
  const ProbVector probs = mix_probs(rds_probs(data, th), 0.2);
  RngStream draw_rng(6);
  const auto draws = draw_with_replacement(probs, 40, draw_rng);
  const CovReport rep = var_rds(draws, data, th, 40);
  CHECK(rep.v_hat == Mat(rep.v_hat.transpose()));
  CHECK(rep.ese.minCoeff() >= 0.0);

  // Single repeated censored draw makes M-hat rank deficient for weibull.
  const Dataset bad({{1.0, true, 1.0}, {2.0, true, 1.0}});
  std::vector<WeightedDraw> deg{{0, 1.0, 1.0}, {0, 1.0, 1.0}};
  CHECK_THROWS_AS((void)var_rdcs(deg, 1, bad, th, 2), SingularMHat);
}

TEST_CASE("confidence intervals") {
  Vec th(1), ese(1);
  th << 1.0;
  ese << 0.1;
  const auto ci = confidence_interval(th, ese, 0.95);
  CHECK(ci[0].lo == doctest::Approx(0.804).epsilon(5e-4));
  CHECK(ci[0].hi == doctest::Approx(1.196).epsilon(5e-4));

  ese << 0.0;
  const auto point = confidence_interval(th, ese, 0.95);
  CHECK(point[0].lo == point[0].hi);

  ese << 0.3;
  const auto zero = confidence_interval(th, ese, 0.0);
  CHECK(zero[0].lo == zero[0].hi);
  CHECK(zero[0].contains(1.0));
}
