#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <vector>

namespace relsub {

namespace detail {

// Fixed fan-in tree over [lo, hi). The shape depends only on the index range,
// never on thread count, so sums are bit-reproducible.
template <class T, class F>
T pairwise_range(std::size_t lo, std::size_t hi, F& term) {
  if (hi - lo <= 16) {
    T s = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) s += term(i);
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  T s = pairwise_range<T>(lo, mid, term);
  s += pairwise_range<T>(mid, hi, term);
  return s;
}

template <class T>
T pairwise_combine(std::vector<T>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  T s = pairwise_combine(parts, lo, mid);
  s += pairwise_combine(parts, mid, hi);
  return s;
}

}  // namespace detail

inline constexpr std::size_t kReduceChunk = 2048;

// Deterministic chunked pairwise reduction, parallelized over chunks.
// term(i) is evaluated exactly once per index.
template <class T, class F>
T pairwise_reduce(std::size_t n, T zero, F&& term) {
  if (n == 0) return zero;
  const std::size_t nc = (n + kReduceChunk - 1) / kReduceChunk;
  std::vector<T> parts(nc, zero);
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (long long c = 0; c < static_cast<long long>(nc); ++c) {
    try {
      const std::size_t lo = static_cast<std::size_t>(c) * kReduceChunk;
      const std::size_t hi = std::min(n, lo + kReduceChunk);
      parts[static_cast<std::size_t>(c)] = detail::pairwise_range<T>(lo, hi, term);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return detail::pairwise_combine(parts, 0, nc);
}

// Parallel elementwise map with the same exception contract.
template <class F>
void parallel_for_each(std::size_t n, F&& body) {
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

// Plain deterministic pairwise sum of a precomputed array.
template <class T>
T pairwise_sum(const std::vector<T>& values, T zero) {
  return pairwise_reduce(values.size(), zero, [&](std::size_t i) { return values[i]; });
}

}  // namespace relsub
