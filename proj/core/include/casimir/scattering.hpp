#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/materials.hpp"

namespace casimir {

/// Row-major storage so per-row coupling tables are contiguous.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Entry generator for a real symmetric matrix M; the log-det solvers read
/// matrices exclusively through this surface, one element or one row/column
/// strip at a time, so hierarchical compression touches only the entries it
/// needs.  Implementations must be safe for concurrent const use.
class MatrixKernel {
 public:
  virtual ~MatrixKernel() = default;
  virtual int dim() const = 0;
  virtual double entry(int i, int j) const = 0;
  /// Contiguous strip M(i, j0..j0+count-1); default loops over entry().
  virtual void fill_row(int i, int j0, int count, double* out) const {
    for (int j = 0; j < count; ++j) out[j] = entry(i, j0 + j);
  }
  void fill_col(int j, int i0, int count, double* out) const {
    fill_row(j, i0, count, out);  // symmetric
  }
};

/// Multipole cutoff for a given aspect ratio: the required number of
/// multipoles scales like R/L, with a floor that keeps small aspect ratios
/// resolved.  eta defaults to 5.
int choose_ell_max(const Geometry& geom, double eta);

/// Round-trip matrix for one (m, xi) block in the symmetrized form
/// sqrt(R_S) e^{-K(L+R)} R_P e^{-K(L+R)} sqrt(R_S), in the multipole basis
/// (l major, polarization minor; E = electric/TM first).  Real symmetric,
/// positive semidefinite, spectral radius < 1 for physical inputs.
///
/// Element (l1 p1, l2 p2) = sqrt(rho_1 rho_2) (e^-tau / tau)
///     int_0^inf dt e^-t sum_q rbar_q(t) A^q_{l1 p1}(x) A^q_{l2 p2}(x),
/// x = 1 + t/tau, tau = 2 xi (L+R)/c, with channel reflections
/// rbar_TM = r_TM, rbar_TE = -r_TE, sphere magnitudes rho = |a_l| or |b_l|,
/// and couplings A^TM_E = tau~, A^TE_E = pi~, A^TM_M = pi~, A^TE_M = tau~.
/// Every factor is nonnegative, so the block is a Gram matrix evaluated by
/// Gauss-Laguerre quadrature; all products are composed in log scale and
/// exponentiated only at the final element.
class BlockKernel : public MatrixKernel {
 public:
  /// quad_order 0 selects the default block_quadrature_order(ell_max).
  BlockKernel(int m, double xi, const Geometry& geom, const MaterialModel& model,
              int ell_max, std::size_t quad_order = 0);

  int dim() const override { return n_; }
  double entry(int i, int j) const override;
  void fill_row(int i, int j0, int count, double* out) const override;

  int m() const { return m_; }
  double xi() const { return xi_; }
  int ell_min() const { return l_min_; }
  int ell_max() const { return l_max_; }
  std::size_t quad_order() const { return q_; }
  int ell_of(int index) const { return l_min_ + index / 2; }
  bool is_magnetic(int index) const { return index % 2 != 0; }

 private:
  int m_, l_min_, l_max_, n_;
  double xi_;
  std::size_t q_;
  // G: n_ rows of 2q shifted channel factors; ln_d: per-row log scale.
  RowMatrixXd g_;
  std::vector<double> ln_d_;
};

struct RoundTripBlock {
  int m;
  double xi;
  int ell_min;
  int ell_max;
  Eigen::MatrixXd entries;
};

/// Materializes a block through the same entry path the generator exposes,
/// after verifying quadrature convergence on probe elements (order doubling,
/// relative tolerance 1e-10, up to max_refine doublings).  Throws a
/// diagnostic error carrying (m, xi, ell_max) if refinement stalls.
RoundTripBlock assemble_block(int m, double xi, const Geometry& geom,
                              const MaterialModel& model, int ell_max,
                              std::size_t quad_order = 0, int max_refine = 3);

/// Non-refining kernel factory (the logdet path consumes kernels directly).
std::unique_ptr<BlockKernel> block_kernel(int m, double xi, const Geometry& geom,
                                          const MaterialModel& model, int ell_max,
                                          std::size_t quad_order = 0);

/// xi = 0 kernels.  Polarizations decouple at zero frequency, so these are
/// single-sector matrices of dimension ell_max - max(1,m) + 1.
///
/// TM sector (eps -> inf limit; identical for Drude, plasma and perfect
/// reflectors): closed form, depends on the aspect ratio only.
class ZeroFreqTmKernel : public MatrixKernel {
 public:
  ZeroFreqTmKernel(int m, double aspect, int ell_max);
  int dim() const override { return n_; }
  double entry(int i, int j) const override;

 private:
  int m_, l_min_, n_;
  std::vector<double> f_;  // per-l log factors; entry = exp(f_i + f_j + lgamma)
};

/// TE sector at xi = 0 for the plasma model (omega_p > 0) or the perfect
/// reflector (omega_p = inf handled by pr flag).
class ZeroFreqTeKernel : public MatrixKernel {
 public:
  ZeroFreqTeKernel(int m, const Geometry& geom, double omega_p, int ell_max,
                   bool perfect_reflector = false, std::size_t quad_order = 0);
  int dim() const override { return n_; }
  double entry(int i, int j) const override;

 private:
  int m_, l_min_, n_;
  std::size_t q_;
  RowMatrixXd g_;
  std::vector<double> ln_d_;
};

}  // namespace casimir
