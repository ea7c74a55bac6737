#pragma once

#include "relsub/data.hpp"
#include "relsub/datagen.hpp"
#include "relsub/likelihood.hpp"
#include "relsub/model.hpp"

// Plain single-threaded reference implementations of the data-parallel
// kernels. Kept for testing the OpenMP paths and for the benchmark target;
// they accumulate left to right, so agreement with the production kernels is
// up to floating-point reassociation.
namespace relsub::ref {

Eval full_loglik_eval(const ParamVector& params, const Dataset& data, int order);

std::vector<double> rds_score_norms(const Dataset& data, const ParamVector& theta);

Dataset generate(const GenConfig& config, const RngStream& rng);

}  // namespace relsub::ref
