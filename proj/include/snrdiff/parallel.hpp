// Copyright 2026 The snrdiff Authors
// SPDX-License-Identifier: Apache-2.0
//
// Index-parallel map with a serial reference path. Both paths evaluate the
// same per-index function and return results in index order, so any
// reduction done afterwards is bit-identical regardless of thread count.
#pragma once

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <vector>

namespace snrdiff {

enum class Exec { serial, parallel };

/// Fixed chunk length for chunked reductions; independent of thread count.
inline constexpr std::size_t kReduceChunk = 256;

template <class R, class F>
std::vector<R> map_indices(std::size_t n, Exec exec, F&& fn) {
  std::vector<std::optional<R>> slots(n);
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) slots[i].emplace(fn(i));
  } else {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto k = static_cast<std::size_t>(i);
      try {
        slots[k].emplace(fn(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Sum of fn(i) over [0, n): per-chunk partial sums in parallel, then a serial
/// left-to-right sum of the partials.
template <class F>
double chunked_sum(std::size_t n, Exec exec, F&& fn) {
  const std::size_t chunks = (n + kReduceChunk - 1) / kReduceChunk;
  const auto partials = map_indices<double>(chunks, exec, [&](std::size_t c) {
    const std::size_t lo = c * kReduceChunk;
    const std::size_t hi = lo + kReduceChunk < n ? lo + kReduceChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += fn(i);
    return s;
  });
  double total = 0.0;
  for (double p : partials) total += p;
  return total;
}

int max_threads();

}  // namespace snrdiff
