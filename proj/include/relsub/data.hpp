#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace relsub {

// One unit: observed time (failure or right-censoring), censoring flag, and
// left-truncation age. t >= t_trunc >= 0 always holds.
struct Observation {
  double t = 0.0;
  bool censored = false;
  double t_trunc = 0.0;
};

// Immutable collection of observations with cached counts.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::initializer_list<Observation> obs);
  explicit Dataset(const std::vector<Observation>& obs);
  static Dataset from_columns(std::vector<double> t, std::vector<std::uint8_t> censored,
                              std::vector<double> t_trunc);

  std::size_t n() const { return t_.size(); }
  std::size_t n0() const { return n0_; }                 // uncensored count
  std::size_t n1() const { return t_.size() - n0_; }     // censored count
  double alpha() const { return n() == 0 ? 0.0 : static_cast<double>(n1()) / n(); }
  bool empty() const { return t_.empty(); }

  Observation obs(std::size_t i) const { return {t_[i], cens_[i] != 0, trunc_[i]}; }
  double time(std::size_t i) const { return t_[i]; }
  bool censored(std::size_t i) const { return cens_[i] != 0; }
  double trunc(std::size_t i) const { return trunc_[i]; }

  // Dataset indices of the censored units, in dataset order.
  std::vector<std::uint32_t> censored_indices() const;

 private:
  void validate();

  std::vector<double> t_;
  std::vector<std::uint8_t> cens_;
  std::vector<double> trunc_;
  std::size_t n0_ = 0;
};

}  // namespace relsub
