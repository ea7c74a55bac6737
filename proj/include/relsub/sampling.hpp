#pragma once

#include <cstdint>
#include <vector>

#include "relsub/data.hpp"
#include "relsub/likelihood.hpp"
#include "relsub/model.hpp"
#include "relsub/rng.hpp"

namespace relsub {

enum class Support { AllUnits, CensoredOnly };

// Normalized subsampling probabilities over a dataset index range. For
// CensoredOnly the vector is compact: probs[k] belongs to dataset index
// indices[k]; every entry is >= 0 and the entries sum to 1 (within 1e-12).
struct ProbVector {
  Support support = Support::AllUnits;
  std::vector<double> probs;
  std::vector<std::uint32_t> indices;  // empty means identity mapping

  std::size_t size() const { return probs.size(); }
  std::uint32_t dataset_index(std::size_t pos) const {
    return indices.empty() ? static_cast<std::uint32_t>(pos) : indices[pos];
  }
  double sum() const;
};

ProbVector uniform_probs(const Dataset& data);

// L-optimal probabilities over all units, proportional to score norms
// ||obs_score(theta, x_i)||_2. Units with exactly zero score get probability
// zero; mixing restores strict positivity.
ProbVector rds_probs(const Dataset& data, const ParamVector& theta);

// A-optimal probabilities, proportional to ||M_g^{-1} obs_score||_2 with
// M_g the mean observed Hessian. For d = 1 the scalar factor cancels and
// the result equals rds_probs exactly.
ProbVector aopt_probs(const Dataset& data, const ParamVector& theta);
ProbVector aopt_probs_with_information(const Dataset& data, const ParamVector& theta,
                                       const Mat& info);

// Censoring-subsampling probabilities over censored units only, proportional
// to || grad log S(t_i) - grad log S(t_il) ||_2.
ProbVector rdcs_probs(const Dataset& data, const ParamVector& theta);

// Convex mix with the uniform distribution on the support:
// (1 - xi) p_i + xi / m. Every entry of the result is >= xi / m.
ProbVector mix_probs(const ProbVector& base, double xi);

// r categorical draws with replacement (alias method: O(n) build, O(1) per
// draw). Each WeightedDraw carries the drawn dataset index, its probability,
// and the general-subsampling weight 1/(r * prob).
std::vector<WeightedDraw> draw_with_replacement(const ProbVector& probs, std::size_t r,
                                                RngStream& rng);

}  // namespace relsub
