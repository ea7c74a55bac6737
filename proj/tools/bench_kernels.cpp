// Compares the OpenMP kernels against the serial reference implementations
// on a synthetic Weibull dataset.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "relsub/datagen.hpp"
#include "relsub/likelihood.hpp"
#include "relsub/reference.hpp"
#include "relsub/sampling.hpp"

using namespace relsub;
namespace chrono = std::chrono;

namespace {

template <class F>
double time_ms(F&& fn, int reps) {
  const auto t0 = chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = chrono::steady_clock::now();
  return chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1000000;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  ModelKind model = ModelKind::parse("weibull");
  Vec tp(2);
  tp << 2.0, 4.0;
  ParamVector theta(model, tp);

  GenConfig cfg;
  cfg.model = model;
  cfg.true_params = theta;
  cfg.n = n;
  cfg.trunc_a = 0.0;
  cfg.trunc_b = 0.1;
  cfg.censor_c = 0.5;
  cfg.censor_d = 1.5;
  cfg.seed = 7;

  std::printf("threads=%d n=%zu reps=%d\n", omp_get_max_threads(), n, reps);

  const double gen_par = time_ms([&] { (void)generate(cfg); }, reps);
  const double gen_ser = time_ms([&] { (void)ref::generate(cfg, RngStream(cfg.seed)); }, reps);
  std::printf("generate          serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n", gen_ser,
              gen_par, gen_ser / gen_par);

  Dataset data = generate(cfg);

  const double ll_par = time_ms([&] { (void)full_loglik_eval(theta, data, 2); }, reps);
  const double ll_ser = time_ms([&] { (void)ref::full_loglik_eval(theta, data, 2); }, reps);
  std::printf("full_loglik(o2)   serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n", ll_ser,
              ll_par, ll_ser / ll_par);

  const double pr_par = time_ms([&] { (void)rds_probs(data, theta); }, reps);
  const double pr_ser = time_ms([&] { (void)ref::rds_score_norms(data, theta); }, reps);
  std::printf("score norms       serial %9.2f ms   openmp %9.2f ms   speedup %.2fx\n", pr_ser,
              pr_par, pr_ser / pr_par);

  return 0;
}
