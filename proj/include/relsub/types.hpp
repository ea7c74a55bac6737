#pragma once

#include <Eigen/Dense>

namespace relsub {

// Parameter dimension is at most 4 (GLFP); fixed-capacity types keep the hot
// loops free of heap allocation.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 4, 4>;

// Value together with its gradient and Hessian in theta.
struct Eval {
  double value = 0.0;
  Vec grad;
  Mat hess;

  static Eval zero(Eigen::Index d) {
    Eval e;
    e.grad = Vec::Zero(d);
    e.hess = Mat::Zero(d, d);
    return e;
  }

  Eval& operator+=(const Eval& o) {
    value += o.value;
    grad += o.grad;
    hess += o.hess;
    return *this;
  }

  Eval& operator*=(double c) {
    value *= c;
    grad *= c;
    hess *= c;
    return *this;
  }
};

}  // namespace relsub
