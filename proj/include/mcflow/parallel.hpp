// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace mcf {

/// Runs body(begin, end) over contiguous slices of [0, count). The slices
/// write disjoint outputs, so the result does not depend on `workers`;
/// reductions over the outputs are done by the caller in index order.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t lanes =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), count);
  if (lanes <= 1) {
    if (count > 0) body(std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> threads;
  threads.reserve(lanes - 1);
  const std::size_t slice = (count + lanes - 1) / lanes;
  auto run_slice = [&](std::size_t lane) {
    const std::size_t begin = lane * slice;
    const std::size_t end = std::min(count, begin + slice);
    if (begin >= end) return;
    try {
      body(begin, end);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  for (std::size_t lane = 1; lane < lanes; ++lane) {
    threads.emplace_back(run_slice, lane);
  }
  run_slice(0);
  threads.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace mcf
