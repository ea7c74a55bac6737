#include <doctest.h>

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/estimators.hpp"
#include "relsub/likelihood.hpp"
#include "support/oracles.hpp"

using namespace relsub;

namespace {

const ModelKind kExp = ModelKind::parse("exponential");
const ModelKind kWeib = ModelKind::parse("weibull");

Dataset heavy_censor_dataset(std::size_t n, double alpha_target, RngStream rng,
                             const ParamVector& truth) {
  std::vector<Observation> obs(n);
  // Short observation window produces the requested heavy censoring.
  const double zscale = -std::log(alpha_target) * mttf(truth);
  for (auto& o : obs) {
    const double til = rng.uniform(0.0, 0.02 * mttf(truth));
    double x = sample_lifetime(truth, rng);
    while (x <= til) x = sample_lifetime(truth, rng);
    const double z = til + rng.uniform(0.5 * zscale, 1.5 * zscale);
    o = {std::min(x, z), z < x, til};
  }
  return Dataset(obs);
}

}  // namespace

TEST_CASE("full mle: exponential closed form and edge cases") {
  RngStream rng(1);
  OptimizerConfig tight;
  tight.grad_tol = 1e-12;
  for (int rep = 0; rep < 10; ++rep) {
    const Dataset data = oracles::random_dataset(100, rng);
    const EstimateReport est = full_mle(data, kExp, tight);
    CHECK(est.converged);
    double denom = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) denom += data.time(i) - data.trunc(i);
    const double closed = static_cast<double>(data.n0()) / denom;
    CHECK(std::fabs(est.theta_tilde.values[0] - closed) <= 1e-10 * closed);
  }

  const EstimateReport single = full_mle(oracles::ds({{1.0, false, 0.0}}), kExp);
  CHECK(single.theta_tilde.values[0] == doctest::Approx(1.0));

  CHECK_THROWS_AS((void)full_mle(oracles::ds({{1.0, true, 0.0}}), kExp), NoUncensoredData);
  CHECK_THROWS_AS((void)full_mle(Dataset(), kExp), EmptyDataset);
}

TEST_CASE("full mle: weibull matches the grid oracle") {
  RngStream rng(77);
  Vec tv(2);
  tv << 2.0, 4.0;
  const ParamVector truth(kWeib, tv);
  std::vector<Observation> obs(500);
  for (auto& o : obs) {
    const double x = sample_lifetime(truth, rng);
    const double z = rng.uniform(3.0, 9.0);
    o = {std::min(x, z), z < x, 0.0};
  }
  const Dataset data(obs);
  const EstimateReport est = full_mle(data, kWeib);
  CHECK(est.converged);
  const Vec grid = oracles::grid_refine_2d(
      [&](double b, double e) {
        Vec v(2);
        v << b, e;
        return full_loglik(ParamVector(kWeib, v), data);
      },
      0.5, 6.0, 0.5, 12.0);
  CHECK(std::fabs(est.theta_tilde.values[0] - grid[0]) <= 1e-3);
  CHECK(std::fabs(est.theta_tilde.values[1] - grid[1]) <= 1e-3);
}

TEST_CASE("uniform estimate: determinism and degenerate draws") {
  const Dataset repeated(std::vector<Observation>(50, Observation{1.3, false, 0.2}));
  const EstimateReport a = uniform_estimate(repeated, kExp, 50, {}, RngStream(9));
  const EstimateReport b = uniform_estimate(repeated, kExp, 50, {}, RngStream(9));
  CHECK(a.theta_tilde.values[0] == b.theta_tilde.values[0]);

  // Every draw is the same unit, so the estimate equals the full MLE.
  const EstimateReport full = full_mle(repeated, kExp);
  CHECK(a.theta_tilde.values[0] ==
        doctest::Approx(full.theta_tilde.values[0]).epsilon(1e-9));

  const Dataset all_cens(std::vector<Observation>(40, Observation{2.0, true, 0.0}));
  CHECK_THROWS_AS((void)uniform_estimate(all_cens, kExp, 10, {}, RngStream(1)),
                  NoUncensoredDraws);
}

TEST_CASE("uniform estimate is consistent for the full mle") {
  RngStream rng(4);
  Vec tv(1);
  tv << 1.0;
  const Dataset data = heavy_censor_dataset(10000, 0.5, rng.fork(1), ParamVector(kExp, tv));
  const double full = full_mle(data, kExp).theta_tilde.values[0];

  const int reps = 60;
  double mean = 0.0, m2 = 0.0;
  for (int i = 1; i <= reps; ++i) {
    const double th =
        uniform_estimate(data, kExp, 500, {}, RngStream(1000 + i)).theta_tilde.values[0];
    const double delta = th - mean;
    mean += delta / i;
    m2 += delta * (th - mean);
  }
  const double se = std::sqrt(m2 / (reps - 1.0) / reps);
  CHECK(std::fabs(mean - full) <= 3.0 * se + 1e-3);
}

TEST_CASE("rds with xi = 1 reduces to uniform subsampling") {
  RngStream rng(6);
  Vec tv(1);
  tv << 1.0;
  const Dataset data = heavy_censor_dataset(5000, 0.7, rng, ParamVector(kExp, tv));
  const EstimateReport rds = rds_estimate(data, kExp, 400, 100, 1.0, {}, RngStream(42));
  const EstimateReport unif = uniform_estimate(data, kExp, 400, {}, RngStream(42));
  // Identical main-stage draws and weights; only the newton start differs,
  // so the maximizers agree to optimizer accuracy.
  CHECK(rds.theta_tilde.values[0] ==
        doctest::Approx(unif.theta_tilde.values[0]).epsilon(1e-6));
  CHECK(rds.pilot_theta.has_value());
}

TEST_CASE("rds: reproducible and error shrinks with r") {
  RngStream rng(13);
  Vec tv(1);
  tv << 1.0;
  const Dataset data = heavy_censor_dataset(20000, 0.9, rng, ParamVector(kExp, tv));
  const double full = full_mle(data, kExp).theta_tilde.values[0];

  const EstimateReport a = rds_estimate(data, kExp, 800, 300, 0.1, {}, RngStream(5));
  const EstimateReport b = rds_estimate(data, kExp, 800, 300, 0.1, {}, RngStream(5));
  CHECK(a.theta_tilde.values[0] == b.theta_tilde.values[0]);
  CHECK(a.draws_used == std::vector<std::size_t>{300, 800});

  double err_small = 0.0, err_big = 0.0;
  const int reps = 40;
  for (int i = 0; i < reps; ++i) {
    err_small += std::fabs(
        rds_estimate(data, kExp, 400, 100, 0.1, {}, RngStream(100 + i)).theta_tilde.values[0] -
        full);
    err_big += std::fabs(
        rds_estimate(data, kExp, 1600, 100, 0.1, {}, RngStream(500 + i)).theta_tilde.values[0] -
        full);
  }
  CHECK(err_big < err_small);
}

TEST_CASE("rds pilot failure on an all-censored dataset") {
  const Dataset all_cens(std::vector<Observation>(500, Observation{2.0, true, 0.0}));
  CHECK_THROWS_AS((void)rds_estimate(all_cens, kExp, 100, 20, 0.1, {}, RngStream(3)),
                  PilotFailed);
}

TEST_CASE("rdcs: bookkeeping, exponential pilot skip, and errors") {
  RngStream rng(17);
  Vec tv(1);
  tv << 1.0;
  const ParamVector truth(kExp, tv);
  // About 50 uncensored in 10000 units.
  std::vector<Observation> obs(10000);
  RngStream g = rng.fork(2);
  for (auto& o : obs) {
    double x = sample_lifetime(truth, g);
    const double z = g.uniform(0.004, 0.006);
    o = {std::min(x, z), z < x, 0.0};
  }
  const Dataset data(obs);
  REQUIRE(data.n0() > 10);
  REQUIRE(data.n0() < 150);

  const std::size_t r = data.n0() + 150;
  const EstimateReport est = rdcs_estimate(data, kExp, r, 100, 0.1, {}, RngStream(8));
  CHECK(est.draws_used == std::vector<std::size_t>{data.n0(), 150});
  CHECK_FALSE(est.pilot_theta.has_value());  // exponential skips the pilot
  CHECK(est.converged);

  CHECK_THROWS_AS(
      (void)rdcs_estimate(data, kExp, data.n0(), 100, 0.1, {}, RngStream(1)),
      SubsampleTooSmall);
  const Dataset no_cens(std::vector<Observation>(30, Observation{1.0, false, 0.0}));
  CHECK_THROWS_AS((void)rdcs_estimate(no_cens, kExp, 10, 5, 0.1, {}, RngStream(1)),
                  NoCensoredUnits);
}

TEST_CASE("rdcs uses a pilot for weibull") {
  RngStream rng(23);
  Vec tv(2);
  tv << 2.0, 4.0;
  const Dataset data = heavy_censor_dataset(8000, 0.95, rng, ParamVector(kWeib, tv));
  REQUIRE(data.n0() < 1000);
  const EstimateReport est =
      rdcs_estimate(data, kWeib, data.n0() + 400, 300, 0.1, {}, RngStream(2));
  CHECK(est.pilot_theta.has_value());
  CHECK(est.converged);
  CHECK(est.cov.has_value());
}

TEST_CASE("converged reports satisfy their first-order conditions") {
  RngStream rng(29);
  const Dataset data = oracles::random_dataset(300, rng);
  const OptimizerConfig opt;
  const EstimateReport full = full_mle(data, kWeib, opt);
  if (full.converged) CHECK(full.final_grad_norm <= opt.grad_tol);
  const EstimateReport unif = uniform_estimate(data, kWeib, 100, opt, RngStream(31));
  if (unif.converged) CHECK(unif.final_grad_norm <= opt.grad_tol);
}
