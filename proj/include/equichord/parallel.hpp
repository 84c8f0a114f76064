#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace equichord {

/// Execution policy for the data-parallel loops. `Serial` is the reference
/// path; both produce identical results because every loop writes to its own
/// slot and reductions run afterwards in index order.
enum class Exec { Serial, Parallel };

template <class F>
void for_each_index(std::size_t n, F&& body, Exec exec = Exec::Parallel) {
  if (exec == Exec::Serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  // First failing index wins, matching the serial path.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class T, class F>
std::vector<T> map_indices(std::size_t n, F&& fn, Exec exec = Exec::Parallel) {
  std::vector<T> out(n);
  for_each_index(n, [&](std::size_t i) { out[i] = fn(i); }, exec);
  return out;
}

}  // namespace equichord
