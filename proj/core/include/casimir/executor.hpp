#pragma once

#include <cstddef>
#include <functional>

namespace casimir {

/// Bounded worker pool for flat task sets.  parallel_for runs fn(i) for
/// i in [0, count) on the pool plus the calling thread; nested calls from
/// inside a task execute inline, which keeps the scheme deadlock-free.
/// Callers store per-index results and reduce in index order, so the
/// numerical output is independent of scheduling.
class Executor {
 public:
  /// Process-wide pool; size from set_default_workers (default: hardware).
  static Executor& shared();
  static void set_default_workers(std::size_t n);

  virtual ~Executor() = default;
  virtual std::size_t workers() const = 0;
  virtual void parallel_for(std::size_t count,
                            const std::function<void(std::size_t)>& fn) = 0;
};

}  // namespace casimir
