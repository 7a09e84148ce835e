#pragma once

#include <atomic>
#include <cstdint>
#include <string>

#include "casimir/scattering.hpp"

namespace casimir {

struct SolverConfig {
  int dense_threshold = 1024;  // dense path at or below this dimension
  double aca_tol = 1e-10;      // relative off-diagonal compression tolerance
  int leaf_size = 64;          // dyadic split until leaf dim <= 2*leaf_size
  int rank_cap = 256;          // ACA rank cap; overflow falls back to dense block
};

struct RankStats {
  int blocks = 0;
  int min_rank = 0;
  int max_rank = 0;
  double mean_rank = 0.0;
  int dense_fallbacks = 0;
};

struct LogDetResult {
  double value = 0.0;  // log det(1 - M), <= 0 for physical round trips
  enum class Method { dense, hodlr } method = Method::dense;
  double estimated_error = 0.0;
  RankStats ranks;
  std::uint64_t entries_read = 0;
};

/// Counts generator reads; used for the entry-frugality diagnostics.
class CountingKernel : public MatrixKernel {
 public:
  explicit CountingKernel(const MatrixKernel& inner) : inner_(inner) {}
  int dim() const override { return inner_.dim(); }
  double entry(int i, int j) const override {
    count_.fetch_add(1, std::memory_order_relaxed);
    return inner_.entry(i, j);
  }
  void fill_row(int i, int j0, int count, double* out) const override {
    count_.fetch_add(count, std::memory_order_relaxed);
    inner_.fill_row(i, j0, count, out);
  }
  std::uint64_t count() const { return count_.load(std::memory_order_relaxed); }

 private:
  const MatrixKernel& inner_;
  mutable std::atomic<std::uint64_t> count_{0};
};

/// log det(1 - M) by symmetric pivoted dense factorization (LDL^T).
/// Throws if 1 - M is not numerically positive definite, which signals a
/// non-physical round trip or insufficient quadrature.
LogDetResult logdet_dense(const MatrixKernel& m);

/// log det(1 - M) through a hierarchical off-diagonal low-rank factorization:
/// dyadic index split, partially pivoted adaptive cross approximation of the
/// off-diagonal blocks (max-norm pivoting, deterministic tie-breaking), and a
/// Woodbury update chain accumulating log-magnitudes level by level.  Reads
/// o(n^2) generator entries for bounded ranks.
LogDetResult logdet_hodlr(const MatrixKernel& m, const SolverConfig& cfg = {});

/// Dispatch: dense at or below cfg.dense_threshold, HODLR above.
LogDetResult logdet(const MatrixKernel& m, const SolverConfig& cfg = {});

}  // namespace casimir
