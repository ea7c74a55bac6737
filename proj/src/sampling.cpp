#include "relsub/sampling.hpp"

#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/reduce.hpp"

namespace relsub {

namespace {

// Normalize nonnegative weights into a ProbVector; the caller guarantees the
// weights line up with the support.
ProbVector normalize(Support support, std::vector<double> w, std::vector<std::uint32_t> idx) {
  const double total = pairwise_sum(w, 0.0);
  if (!(total > 0.0)) throw AllScoresZero();
  parallel_for_each(w.size(), [&](std::size_t i) { w[i] /= total; });
  ProbVector p;
  p.support = support;
  p.probs = std::move(w);
  p.indices = std::move(idx);
  return p;
}

Mat mean_information(const Dataset& data, const ParamVector& theta) {
  const Eigen::Index d = static_cast<Eigen::Index>(theta.dim());
  Mat sum = pairwise_reduce(data.n(), Mat(Mat::Zero(d, d)), [&](std::size_t i) {
    return Mat(obs_loglik_eval(theta, data.obs(i), 2).hess);
  });
  return sum / static_cast<double>(data.n());
}

}  // namespace

double ProbVector::sum() const {
  double s = 0.0;
  for (double p : probs) s += p;
  return s;
}

ProbVector uniform_probs(const Dataset& data) {
  if (data.empty()) throw EmptyDataset();
  ProbVector p;
  p.support = Support::AllUnits;
  p.probs.assign(data.n(), 1.0 / static_cast<double>(data.n()));
  return p;
}

ProbVector rds_probs(const Dataset& data, const ParamVector& theta) {
  if (data.empty()) throw EmptyDataset();
  std::vector<double> norms(data.n());
  parallel_for_each(data.n(), [&](std::size_t i) {
    norms[i] = obs_loglik_eval(theta, data.obs(i), 1).grad.norm();
  });
  return normalize(Support::AllUnits, std::move(norms), {});
}

ProbVector aopt_probs(const Dataset& data, const ParamVector& theta) {
  if (theta.dim() == 1) return rds_probs(data, theta);
  return aopt_probs_with_information(data, theta, mean_information(data, theta));
}

ProbVector aopt_probs_with_information(const Dataset& data, const ParamVector& theta,
                                       const Mat& info) {
  if (data.empty()) throw EmptyDataset();
  if (theta.dim() == 1) return rds_probs(data, theta);

  Eigen::MatrixXd m = info;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(emax > 0.0) || es.eigenvalues().cwiseAbs().minCoeff() <= 1e-12 * emax)
    throw SingularInformationMatrix();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);

  std::vector<double> norms(data.n());
  parallel_for_each(data.n(), [&](std::size_t i) {
    Eigen::VectorXd s = obs_loglik_eval(theta, data.obs(i), 1).grad;
    norms[i] = lu.solve(s).norm();
  });
  return normalize(Support::AllUnits, std::move(norms), {});
}

ProbVector rdcs_probs(const Dataset& data, const ParamVector& theta) {
  if (data.empty()) throw EmptyDataset();
  std::vector<std::uint32_t> idx = data.censored_indices();
  if (idx.empty()) throw NoCensoredUnits();
  std::vector<double> norms(idx.size());
  parallel_for_each(idx.size(), [&](std::size_t k) {
    const std::size_t i = idx[k];
    Vec g = log_survival_eval(theta, data.time(i), 1).grad;
    if (data.trunc(i) > 0.0) g -= log_survival_eval(theta, data.trunc(i), 1).grad;
    norms[k] = g.norm();
  });
  return normalize(Support::CensoredOnly, std::move(norms), std::move(idx));
}

ProbVector mix_probs(const ProbVector& base, double xi) {
  if (!(xi >= 0.0 && xi <= 1.0)) throw ValidationError("xi must lie in [0,1]");
  const double m = static_cast<double>(base.size());
  ProbVector out = base;
  const double u = xi / m;
  for (double& p : out.probs) p = (1.0 - xi) * p + u;
  return out;
}

std::vector<WeightedDraw> draw_with_replacement(const ProbVector& probs, std::size_t r,
                                                RngStream& rng) {
  if (r == 0) throw ValidationError("subsample size must be positive");
  const std::size_t n = probs.size();
  if (n == 0) throw EmptyDataset();

  // Vose alias table; stacks are filled in index order so the build is a
  // deterministic function of the probability vector.
  std::vector<double> accept(n, 0.0);
  std::vector<std::uint32_t> alias(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  small.reserve(n);
  large.reserve(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = probs.probs[i] * nd;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    accept[s] = scaled[s];
    alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (std::uint32_t i : large) accept[i] = 1.0;
  for (std::uint32_t i : small) accept[i] = 1.0;  // numerical leftovers

  std::vector<WeightedDraw> draws(r);
  const double rd = static_cast<double>(r);
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t cell =
        std::min(n - 1, static_cast<std::size_t>(rng.next_double() * nd));
    const bool keep = rng.next_double() < accept[cell];
    const std::size_t pos = keep ? cell : alias[cell];
    const double p = probs.probs[pos];
    draws[k] = WeightedDraw{probs.dataset_index(pos), p, 1.0 / (rd * p)};
  }
  return draws;
}

}  // namespace relsub
