#include "relsub/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "relsub/errors.hpp"
#include "relsub/io.hpp"
#include "relsub/sampling.hpp"

namespace relsub {

namespace {

constexpr std::uint64_t kRepDataTag = 0xD0;
constexpr std::uint64_t kRepEstTag = 0xE0;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Cell {
  bool ok = false;
  bool has_cov = false;
  Vec theta;
  Vec ese;
  double wall = 0.0;
};

}  // namespace

void SimConfig::validate() const {
  if (m == 0) throw ConfigError("replicate count m must be positive");
  if (estimators.empty()) throw ConfigError("at least one estimator is required");
  for (const EstimatorSpec& e : estimators) e.validate();
  if (gen.has_value() == data_path.has_value())
    throw ConfigError("exactly one of generator config / data path must be given");
  if (data_path && reference == Reference::TrueTheta)
    throw ConfigError("true-theta reference requires generated data");
  if (!(ci_level >= 0.0 && ci_level < 1.0)) throw ConfigError("ci level must lie in [0,1)");
  if (workers < 0) throw ConfigError("workers must be nonnegative");
  if (gen) {
    gen->validate();
    if (gen->model.tag != model.tag)
      throw ConfigError("generator model does not match the study model");
  }
}

SimSummary run_simulation(const SimConfig& config) {
  config.validate();
  const std::size_t m = config.m;
  const std::size_t ne = config.estimators.size();
  const ModelKind model = config.model;
  const RngStream root(config.seed);

  std::optional<Dataset> shared;
  if (config.data_path) {
    shared = ingest_csv(*config.data_path, config.time_scale);
  } else if (config.fix_dataset) {
    shared = generate(*config.gen, root.fork(kRepDataTag, 0));
  }

  std::vector<Cell> cells(m * ne);
  std::vector<Vec> refs(m);
  std::vector<std::uint8_t> ref_ok(m, 0);
  std::vector<double> alphas(m, 0.0);

  const int nthreads = config.workers > 0 ? config.workers : omp_get_max_threads();
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
  for (long long bb = 0; bb < static_cast<long long>(m); ++bb) {
    try {
      const std::size_t b = static_cast<std::size_t>(bb);
      Dataset local;
      const Dataset* data = nullptr;
      if (shared) {
        data = &*shared;
      } else {
        local = generate(*config.gen, root.fork(kRepDataTag, b + 1));
        data = &local;
      }
      alphas[b] = data->alpha();

      if (config.reference == Reference::TrueTheta) {
        refs[b] = config.gen->true_params.values;
        ref_ok[b] = 1;
      } else {
        try {
          refs[b] =
              full_mle(*data, model, config.estimators.front().optimizer).theta_tilde.values;
          ref_ok[b] = 1;
        } catch (const std::exception&) {
          ref_ok[b] = 0;
        }
      }

      for (std::size_t e = 0; e < ne; ++e) {
        if (!ref_ok[b]) continue;
        Cell& cell = cells[b * ne + e];
        try {
          EstimateReport rep = run_estimator(*data, model, config.estimators[e],
                                             root.fork(kRepEstTag, b + 1, e + 1));
          cell.ok = true;
          cell.theta = rep.theta_tilde.values;
          cell.wall = rep.wall_time;
          if (rep.cov) {
            cell.has_cov = true;
            cell.ese = rep.cov->ese;
          }
        } catch (const std::exception&) {
          cell.ok = false;
        }
      }
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  SimSummary summary;
  summary.model = model;
  summary.m = m;
  summary.reference = config.reference;
  summary.seed = config.seed;
  summary.mean_alpha = 0.0;
  for (double a : alphas) summary.mean_alpha += a;
  summary.mean_alpha /= static_cast<double>(m);
  for (std::size_t b = 0; b < m; ++b)
    if (!ref_ok[b]) ++summary.reference_failures;

  const Eigen::Index d = static_cast<Eigen::Index>(summary.model.dim());
  for (std::size_t e = 0; e < ne; ++e) {
    EstimatorSummary es;
    es.method = config.estimators[e].method;
    es.rmse = Vec::Constant(d, kNan);
    es.bias = Vec::Constant(d, kNan);
    es.se = Vec::Constant(d, kNan);
    es.cp = Vec::Constant(d, kNan);
    es.mean_ese = Vec::Constant(d, kNan);

    Vec sum_err = Vec::Zero(d), sum_sq = Vec::Zero(d), sum_ese = Vec::Zero(d);
    Vec cover = Vec::Zero(d);
    double total_sq = 0.0, total_wall = 0.0;
    std::size_t ok_count = 0, cov_count = 0;
    for (std::size_t b = 0; b < m; ++b) {
      const Cell& cell = cells[b * ne + e];
      if (!ref_ok[b] || !cell.ok) continue;
      ++ok_count;
      const Vec errv = cell.theta - refs[b];
      sum_err += errv;
      sum_sq += errv.cwiseProduct(errv);
      total_sq += errv.squaredNorm();
      total_wall += cell.wall;
      if (cell.has_cov) {
        ++cov_count;
        sum_ese += cell.ese;
        const auto cis = confidence_interval(cell.theta, cell.ese, config.ci_level);
        for (Eigen::Index k = 0; k < d; ++k)
          if (cis[static_cast<std::size_t>(k)].contains(refs[b][k])) cover[k] += 1.0;
      }
    }
    es.successes = ok_count;
    es.failures = m - ok_count;
    if (ok_count > 0) {
      const double mo = static_cast<double>(ok_count);
      es.bias = sum_err / mo;
      es.rmse = (sum_sq / mo).cwiseSqrt();
      Vec var = sum_sq / mo - es.bias.cwiseProduct(es.bias);
      es.se = var.cwiseMax(0.0).cwiseSqrt();
      es.rmse_total = std::sqrt(total_sq) / mo;
      es.mean_wall_time = total_wall / mo;
    }
    if (cov_count > 0) {
      es.mean_ese = sum_ese / static_cast<double>(cov_count);
      es.cp = cover / static_cast<double>(cov_count);
    }
    summary.estimators.push_back(std::move(es));
  }
  return summary;
}

std::vector<SweepPoint> sweep_censoring(const SimConfig& base,
                                        const std::vector<double>& alphas) {
  if (!base.gen) throw ConfigError("sweep-alpha requires a generator config");
  std::vector<SweepPoint> out;
  for (double alpha : alphas) {
    SweepPoint point;
    point.alpha = alpha;
    try {
      SimConfig cfg = base;
      auto window = calibrate_alpha(cfg.gen->model, cfg.gen->true_params, alpha,
                                    {cfg.gen->trunc_a, cfg.gen->trunc_b});
      cfg.gen->censor_c = window.first;
      cfg.gen->censor_d = window.second;
      point.summary = run_simulation(cfg);
    } catch (const std::exception& ex) {
      point.error = ex.what();
    }
    out.push_back(std::move(point));
  }
  return out;
}

ProbMethod parse_prob_method(const std::string& name) {
  if (name == "rds") return ProbMethod::Rds;
  if (name == "rdcs") return ProbMethod::Rdcs;
  if (name == "aopt") return ProbMethod::Aopt;
  throw ValidationError("unknown probability method: " + name);
}

void export_prob_histogram(const Dataset& data, const ParamVector& theta, ProbMethod method,
                           int bins, std::ostream& units_csv, std::ostream& bins_csv) {
  if (bins <= 0) throw ValidationError("bin count must be positive");
  ProbVector probs;
  switch (method) {
    case ProbMethod::Rds:
      probs = rds_probs(data, theta);
      break;
    case ProbMethod::Rdcs:
      probs = rdcs_probs(data, theta);
      break;
    case ProbMethod::Aopt:
      probs = aopt_probs(data, theta);
      break;
  }

  std::vector<double> logp(probs.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  units_csv << "index,log_prob,censored\n";
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const std::uint32_t idx = probs.dataset_index(k);
    logp[k] = std::log(probs.probs[k]);
    if (std::isfinite(logp[k])) {
      lo = std::min(lo, logp[k]);
      hi = std::max(hi, logp[k]);
    }
    units_csv << idx << ',' << format_double(logp[k]) << ',' << (data.censored(idx) ? 1 : 0)
              << '\n';
  }

  bins_csv << "bin_lo,bin_hi,count_uncensored,count_censored\n";
  if (!(hi > lo)) hi = lo + 1.0;  // degenerate range: one bin holds everything
  const double width = (hi - lo) / bins;
  std::vector<std::size_t> cu(static_cast<std::size_t>(bins), 0),
      cc(static_cast<std::size_t>(bins), 0);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (!std::isfinite(logp[k])) continue;
    auto bin = static_cast<std::size_t>(
        std::min<double>(bins - 1, std::max(0.0, (logp[k] - lo) / width)));
    (data.censored(probs.dataset_index(k)) ? cc : cu)[bin] += 1;
  }
  for (int b = 0; b < bins; ++b)
    bins_csv << format_double(lo + b * width) << ',' << format_double(lo + (b + 1) * width)
             << ',' << cu[static_cast<std::size_t>(b)] << ',' << cc[static_cast<std::size_t>(b)]
             << '\n';
}

MttfReport mttf_report(const EstimateReport& estimate, double time_scale, std::uint64_t seed) {
  if (!estimate.converged)
    throw ValidationError("mttf report requires a converged estimate");
  if (!(time_scale > 0.0)) throw ValidationError("time scale must be positive");
  MttfReport rep;
  rep.mttf_model_scale = mttf(estimate.theta_tilde);
  rep.mttf_original_units = rep.mttf_model_scale / time_scale;
  rep.method = estimate.method;
  rep.seed = seed;
  rep.time_scale = time_scale;
  return rep;
}

std::string reference_name(Reference r) {
  return r == Reference::FullMle ? "full_mle" : "true_theta";
}

Reference parse_reference(const std::string& name) {
  if (name == "full_mle") return Reference::FullMle;
  if (name == "true_theta") return Reference::TrueTheta;
  throw ValidationError("unknown reference: " + name);
}

}  // namespace relsub
