#include "relsub/uncertainty.hpp"

#include <boost/math/distributions/normal.hpp>
#include <cmath>

#include "relsub/errors.hpp"
#include "relsub/reduce.hpp"

namespace relsub {

namespace {

Mat solve_sandwich(const Mat& m_hat, const Mat& lambda_hat) {
  Eigen::MatrixXd m = m_hat;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (!lu.isInvertible()) throw SingularMHat();
  const Eigen::MatrixXd minv = lu.inverse();
  Eigen::MatrixXd v = minv * Eigen::MatrixXd(lambda_hat) * minv.transpose();
  // Enforce exact symmetry; the asymmetry before this is floating-point noise.
  v = 0.5 * (v + v.transpose()).eval();
  return v;
}

CovReport assemble(Mat m_hat, Mat lambda_hat, std::size_t r, double gamma) {
  CovReport rep;
  rep.m_hat = std::move(m_hat);
  rep.lambda_hat = std::move(lambda_hat);
  rep.v_hat = solve_sandwich(rep.m_hat, rep.lambda_hat);
  rep.gamma = gamma;
  const Eigen::Index d = rep.v_hat.rows();
  rep.ese = Vec::Zero(d);
  for (Eigen::Index k = 0; k < d; ++k)
    rep.ese[k] = std::sqrt(std::max(0.0, rep.v_hat(k, k)) / static_cast<double>(r));
  return rep;
}

// Score of one censored unit under the censoring formulation:
// grad log S(t) - grad log S(t_trunc).
Vec censored_score(const ParamVector& theta, const Dataset& data, std::size_t i) {
  Vec g = log_survival_eval(theta, data.time(i), 1).grad;
  if (data.trunc(i) > 0.0) g -= log_survival_eval(theta, data.trunc(i), 1).grad;
  return g;
}

}  // namespace

CovReport var_rds(std::span<const WeightedDraw> draws, const Dataset& data,
                  const ParamVector& theta_tilde, std::size_t r, bool include_gamma) {
  if (draws.empty()) throw ValidationError("no draws");
  const Eigen::Index d = static_cast<Eigen::Index>(theta_tilde.dim());
  const double n = static_cast<double>(data.n());
  const double rr = static_cast<double>(r);
  const double gamma = include_gamma ? rr / n : 0.0;

  struct Acc {
    Mat m, lam;
    Acc& operator+=(const Acc& o) {
      m += o.m;
      lam += o.lam;
      return *this;
    }
  };
  Acc zero{Mat::Zero(d, d), Mat::Zero(d, d)};
  Acc sum = pairwise_reduce(draws.size(), zero, [&](std::size_t k) {
    const WeightedDraw& w = draws[k];
    if (!(w.prob > 0.0)) throw ZeroProbabilityDraw("draw has zero probability");
    const Eval e = obs_loglik_eval(theta_tilde, data.obs(w.index), 2);
    Acc a{Mat::Zero(d, d), Mat::Zero(d, d)};
    a.m = e.hess / w.prob;
    a.lam = ((1.0 + n * gamma * w.prob) / (w.prob * w.prob)) * (e.grad * e.grad.transpose());
    return a;
  });

  Mat m_hat = sum.m / (n * rr);
  Mat lambda_hat = sum.lam / (n * n * rr);
  return assemble(std::move(m_hat), std::move(lambda_hat), r, gamma);
}

CovReport var_rdcs(std::span<const WeightedDraw> draws, std::size_t n_uncensored,
                   const Dataset& data, const ParamVector& theta_tilde, std::size_t r,
                   bool include_gamma) {
  if (draws.size() <= n_uncensored) throw InsufficientSubsampleSize("need r > n0");
  const Eigen::Index d = static_cast<Eigen::Index>(theta_tilde.dim());
  const double n = static_cast<double>(data.n());
  const double rr = static_cast<double>(r);
  const double gamma = include_gamma ? rr / n : 0.0;

  struct Acc {
    Mat m, lam;
    Vec mean;
    Acc& operator+=(const Acc& o) {
      m += o.m;
      lam += o.lam;
      mean += o.mean;
      return *this;
    }
  };
  Acc zero{Mat::Zero(d, d), Mat::Zero(d, d), Vec::Zero(d)};
  Acc sum = pairwise_reduce(draws.size(), zero, [&](std::size_t k) {
    const WeightedDraw& w = draws[k];
    Acc a{Mat::Zero(d, d), Mat::Zero(d, d), Vec::Zero(d)};
    a.m = w.weight * obs_loglik_eval(theta_tilde, data.obs(w.index), 2).hess;
    if (k >= n_uncensored) {
      if (!(w.prob > 0.0)) throw ZeroProbabilityDraw("censored draw has zero probability");
      const Vec s = censored_score(theta_tilde, data, w.index);
      a.lam = ((1.0 + n * gamma * w.prob) / (w.prob * w.prob)) * (s * s.transpose());
      a.mean = s / w.prob;
    }
    return a;
  });

  // The published display divides the weighted Hessian sum by n*r, which is
  // off by a factor r against the Theorem-3 sandwich (the weights already
  // sum to about n). Dividing by n alone makes M-hat estimate M_g and the
  // resulting ese consistent with the observed spread of the estimator.
  Mat m_hat = sum.m / n;
  Vec mean_term = sum.mean / (n * rr);
  Mat lambda_hat = sum.lam / (n * n * rr);
  lambda_hat -= (mean_term * mean_term.transpose()).eval();
  return assemble(std::move(m_hat), std::move(lambda_hat), r, gamma);
}

CovReport oracle_cov_general(const Dataset& data, const ParamVector& theta_hat,
                             const ProbVector& probs, std::size_t r) {
  if (data.empty()) throw EmptyDataset();
  if (probs.support != Support::AllUnits || probs.size() != data.n())
    throw ValidationError("probability vector does not match the dataset");
  const Eigen::Index d = static_cast<Eigen::Index>(theta_hat.dim());

  struct Acc {
    Mat m, lam;
    Acc& operator+=(const Acc& o) {
      m += o.m;
      lam += o.lam;
      return *this;
    }
  };
  Acc zero{Mat::Zero(d, d), Mat::Zero(d, d)};
  Acc sum = pairwise_reduce(data.n(), zero, [&](std::size_t i) {
    const Eval e = obs_loglik_eval(theta_hat, data.obs(i), 2);
    Acc a{Mat::Zero(d, d), Mat::Zero(d, d)};
    a.m = e.hess;
    const double sn = e.grad.squaredNorm();
    if (sn > 0.0) {
      if (!(probs.probs[i] > 0.0))
        throw ZeroProbabilityDraw("zero probability on a unit with nonzero score");
      a.lam = (e.grad * e.grad.transpose()) / probs.probs[i];
    }
    return a;
  });

  const double n = static_cast<double>(data.n());
  return assemble(Mat(sum.m / n), Mat(sum.lam / (n * n)), r, 0.0);
}

CovReport oracle_cov_censoring(const Dataset& data, const ParamVector& theta_hat,
                               const ProbVector& probs, std::size_t r) {
  if (data.empty()) throw EmptyDataset();
  if (probs.support != Support::CensoredOnly || probs.size() != data.n1())
    throw ValidationError("probability vector does not match the censored units");
  const Eigen::Index d = static_cast<Eigen::Index>(theta_hat.dim());
  const double n = static_cast<double>(data.n());

  // M_g over the full data.
  Mat m_sum = pairwise_reduce(data.n(), Mat(Mat::Zero(d, d)), [&](std::size_t i) {
    return Mat(obs_loglik_eval(theta_hat, data.obs(i), 2).hess);
  });

  struct Acc {
    Mat lam;
    Vec mean;
    Acc& operator+=(const Acc& o) {
      lam += o.lam;
      mean += o.mean;
      return *this;
    }
  };
  Acc zero{Mat::Zero(d, d), Vec::Zero(d)};
  Acc sum = pairwise_reduce(probs.size(), zero, [&](std::size_t k) {
    const std::size_t i = probs.dataset_index(k);
    const Vec s = censored_score(theta_hat, data, i);
    Acc a{Mat::Zero(d, d), Vec::Zero(d)};
    a.mean = s;
    if (s.squaredNorm() > 0.0) {
      if (!(probs.probs[k] > 0.0))
        throw ZeroProbabilityDraw("zero probability on a unit with nonzero score");
      a.lam = (s * s.transpose()) / probs.probs[k];
    }
    return a;
  });

  Mat lambda = sum.lam / (n * n);
  Vec mean_term = sum.mean / n;
  lambda -= (mean_term * mean_term.transpose()).eval();
  return assemble(Mat(m_sum / n), std::move(lambda), r, 0.0);
}

std::vector<Interval> confidence_interval(const Vec& theta, const Vec& ese, double level) {
  if (!(level >= 0.0 && level < 1.0))
    throw ValidationError("confidence level must lie in [0,1)");
  if (theta.size() != ese.size()) throw ValidationError("theta/ese size mismatch");
  const double z =
      level == 0.0 ? 0.0 : boost::math::quantile(boost::math::normal(), 0.5 * (1.0 + level));
  std::vector<Interval> out(static_cast<std::size_t>(theta.size()));
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    out[static_cast<std::size_t>(k)] = {theta[k] - z * ese[k], theta[k] + z * ese[k]};
  return out;
}

}  // namespace relsub
