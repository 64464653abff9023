#pragma once

#include <chrono>
#include <optional>

#include "fflab/error.hpp"

namespace fflab {

namespace detail {
inline thread_local std::optional<std::chrono::steady_clock::time_point> deadline;
}  // namespace detail

/// Installs a wall-clock deadline for the current thread. Long-running loops
/// poll check_deadline() and abort with a resource-bound error once it passes.
class ScopedDeadline {
 public:
  explicit ScopedDeadline(std::chrono::duration<double> budget) : previous_(detail::deadline) {
    detail::deadline = std::chrono::steady_clock::now() +
                       std::chrono::duration_cast<std::chrono::steady_clock::duration>(budget);
  }
  ~ScopedDeadline() { detail::deadline = previous_; }
  ScopedDeadline(const ScopedDeadline&) = delete;
  ScopedDeadline& operator=(const ScopedDeadline&) = delete;

 private:
  std::optional<std::chrono::steady_clock::time_point> previous_;
};

inline void check_deadline() {
  if (detail::deadline && std::chrono::steady_clock::now() > *detail::deadline) {
    throw Error(Errc::resource_bound, "wall-clock budget exceeded");
  }
}

}  // namespace fflab
