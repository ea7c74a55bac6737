#include "relsub/data.hpp"

#include <cmath>

#include "relsub/errors.hpp"

namespace relsub {

Dataset::Dataset(const std::vector<Observation>& obs) {
  t_.reserve(obs.size());
  cens_.reserve(obs.size());
  trunc_.reserve(obs.size());
  for (const Observation& o : obs) {
    t_.push_back(o.t);
    cens_.push_back(o.censored ? 1 : 0);
    trunc_.push_back(o.t_trunc);
  }
  validate();
}

Dataset::Dataset(std::initializer_list<Observation> obs)
    : Dataset(std::vector<Observation>(obs)) {}

Dataset Dataset::from_columns(std::vector<double> t, std::vector<std::uint8_t> censored,
                              std::vector<double> t_trunc) {
  if (t.size() != censored.size() || t.size() != t_trunc.size())
    throw ValidationError("dataset columns have mismatched lengths");
  Dataset d;
  d.t_ = std::move(t);
  d.cens_ = std::move(censored);
  d.trunc_ = std::move(t_trunc);
  d.validate();
  return d;
}

void Dataset::validate() {
  std::size_t n0 = 0;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!std::isfinite(t_[i]) || !std::isfinite(trunc_[i]))
      throw ValidationError("observation " + std::to_string(i) + " has non-finite time");
    if (!(t_[i] >= trunc_[i]) || !(trunc_[i] >= 0.0))
      throw ValidationError("observation " + std::to_string(i) +
                            " violates t >= t_trunc >= 0");
    if (cens_[i] == 0) ++n0;
  }
  n0_ = n0;
}

std::vector<std::uint32_t> Dataset::censored_indices() const {
  std::vector<std::uint32_t> idx;
  idx.reserve(n1());
  for (std::size_t i = 0; i < t_.size(); ++i)
    if (cens_[i] != 0) idx.push_back(static_cast<std::uint32_t>(i));
  return idx;
}

}  // namespace relsub
