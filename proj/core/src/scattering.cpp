#include "casimir/scattering.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/legendre.hpp"
#include "casimir/log_signed.hpp"
#include "casimir/mie.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Shared dot product for entry generation.  Fixed four-way accumulation
/// order keeps results bit-identical between single-entry and batched paths.
double strided_dot(const double* a, const double* b, int n) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return ((s0 + s1) + (s2 + s3));
}

double scaled_entry(double ln_di, double ln_dj, double dot) {
  if (dot <= 0.0) return 0.0;
  return std::exp(ln_di + ln_dj + std::log(dot));
}

}  // namespace

int choose_ell_max(const Geometry& geom, double eta) {
  if (!(eta > 0.0)) throw std::invalid_argument("choose_ell_max: eta must be > 0");
  constexpr int ell_floor = 20;
  const double scaled = eta * geom.aspect();
  if (scaled >= 1e9) throw std::invalid_argument("choose_ell_max: aspect ratio out of range");
  return std::max(ell_floor, static_cast<int>(std::ceil(scaled)));
}

BlockKernel::BlockKernel(int m, double xi, const Geometry& geom,
                         const MaterialModel& model, int ell_max,
                         std::size_t quad_order)
    : m_(m),
      l_min_(std::max(1, m)),
      l_max_(ell_max),
      n_(2 * (ell_max - std::max(1, m) + 1)),
      xi_(xi),
      q_(quad_order ? quad_order : block_quadrature_order(ell_max)) {
  if (m < 0) throw std::domain_error("block: m must be >= 0");
  if (!(xi > 0.0)) throw std::domain_error("block: xi must be > 0");
  if (ell_max < l_min_) throw std::domain_error("block: ell_max < max(1, m)");

  const double dist = geom.center_distance();
  const double tau = 2.0 * xi * dist / speed_of_light;
  const auto& rule = gauss_laguerre(q_);
  const auto mie = mie_columns(l_max_, xi, geom.R, model);

  const int nl = l_max_ - l_min_ + 1;
  // ln couplings by channel: columns [0, q) carry TM, [q, 2q) carry TE.
  RowMatrixXd lng(n_, 2 * static_cast<int>(q_));
  lng.setConstant(kNegInf);

  for (std::size_t iq = 0; iq < q_; ++iq) {
    const double t = rule.nodes[iq];
    const double x = 1.0 + t / tau;
    const double kappa = xi / speed_of_light * x;
    const double k = std::sqrt(std::fmax(kappa * kappa - (xi / speed_of_light) * (xi / speed_of_light), 0.0));
    const auto fr = fresnel(k, xi, model);
    const double ln_rtm = fr.r_tm > 0.0 ? std::log(fr.r_tm) : kNegInf;
    const double ln_rte = fr.r_te < 0.0 ? std::log(-fr.r_te) : kNegInf;
    const double half_wtm = 0.5 * (rule.ln_weights[iq] + ln_rtm);
    const double half_wte = 0.5 * (rule.ln_weights[iq] + ln_rte);
    const auto ang = pi_tau_columns(m_, x, l_max_);
    for (int il = 0; il < nl; ++il) {
      const int re = 2 * il, rm = 2 * il + 1;
      lng(re, iq) = ang.ln_tau[il] + half_wtm;            // E row, TM channel
      lng(re, q_ + iq) = ang.ln_pi[il] + half_wte;        // E row, TE channel
      lng(rm, iq) = ang.ln_pi[il] + half_wtm;             // M row, TM channel
      lng(rm, q_ + iq) = ang.ln_tau[il] + half_wte;       // M row, TE channel
    }
  }

  g_.resize(n_, 2 * static_cast<int>(q_));
  ln_d_.resize(n_);
  const double ln_pref = 0.5 * (-tau - std::log(tau));
  for (int r = 0; r < n_; ++r) {
    const int l = l_min_ + r / 2;
    const double ln_rho = (r % 2 == 0) ? mie.ln_a[l] : mie.ln_b[l];
    const double shift = lng.row(r).maxCoeff();
    if (shift == kNegInf) {
      g_.row(r).setZero();
      ln_d_[r] = kNegInf;
      continue;
    }
    for (int c = 0; c < lng.cols(); ++c) g_(r, c) = std::exp(lng(r, c) - shift);
    ln_d_[r] = 0.5 * ln_rho + ln_pref + shift;
  }
}

double BlockKernel::entry(int i, int j) const {
  const double dot = strided_dot(g_.row(i).data(), g_.row(j).data(),
                                 static_cast<int>(g_.cols()));
  return scaled_entry(ln_d_[i], ln_d_[j], dot);
}

void BlockKernel::fill_row(int i, int j0, int count, double* out) const {
  for (int j = 0; j < count; ++j) out[j] = entry(i, j0 + j);
}

std::unique_ptr<BlockKernel> block_kernel(int m, double xi, const Geometry& geom,
                                          const MaterialModel& model, int ell_max,
                                          std::size_t quad_order) {
  return std::make_unique<BlockKernel>(m, xi, geom, model, ell_max, quad_order);
}

RoundTripBlock assemble_block(int m, double xi, const Geometry& geom,
                              const MaterialModel& model, int ell_max,
                              std::size_t quad_order, int max_refine) {
  std::size_t q = quad_order ? quad_order : block_quadrature_order(ell_max);
  auto kernel = std::make_unique<BlockKernel>(m, xi, geom, model, ell_max, q);
  const int n = kernel->dim();

  // Probe elements: diagonal extremes, corners, and a fixed interior sample.
  std::vector<std::pair<int, int>> probes = {
      {0, 0}, {n - 1, n - 1}, {0, n - 1}, {n / 2, n / 2}, {0, n / 2}, {n / 2, n - 1}};
  for (int s = 1; s <= 8; ++s) {
    const int i = (s * 2654435761u) % n, j = (s * 40503u) % n;
    probes.emplace_back(i, j);
  }

  constexpr double tol = 1e-10;
  for (int pass = 0;; ++pass) {
    auto refined = std::make_unique<BlockKernel>(m, xi, geom, model, ell_max, 2 * q);
    double worst = 0.0;
    for (auto [i, j] : probes) {
      const double a = kernel->entry(i, j), b = refined->entry(i, j);
      const double scale = std::fmax(std::fmax(std::fabs(a), std::fabs(b)), 1e-300);
      // Elements far below the diagonal scale are irrelevant to the log-det.
      const double diag_scale =
          std::fmax(std::fabs(kernel->entry(i, i)), std::fabs(kernel->entry(j, j)));
      if (scale < 1e-14 * std::fmax(diag_scale, 1e-300)) continue;
      worst = std::fmax(worst, std::fabs(a - b) / scale);
    }
    if (worst <= tol) break;
    if (pass >= max_refine) {
      std::ostringstream os;
      os << "block quadrature failed to converge: m=" << m << " xi=" << xi
         << " ell_max=" << ell_max << " order=" << q << " residual=" << worst;
      throw std::runtime_error(os.str());
    }
    q *= 2;
    kernel = std::move(refined);
  }

  RoundTripBlock blk{m, xi, kernel->ell_min(), kernel->ell_max(),
                     Eigen::MatrixXd(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) blk.entries(i, j) = kernel->entry(i, j);

  for (int i = 0; i < n; ++i) {
    const double d = blk.entries(i, i);
    if (!(d >= 0.0) || !(d < 1.0)) {
      std::ostringstream os;
      os << "block diagonal out of [0,1): m=" << m << " xi=" << xi << " entry("
         << i << ")=" << d;
      throw std::runtime_error(os.str());
    }
  }
  return blk;
}

ZeroFreqTmKernel::ZeroFreqTmKernel(int m, double aspect, int ell_max)
    : m_(m), l_min_(std::max(1, m)), n_(ell_max - std::max(1, m) + 1) {
  if (m < 0 || ell_max < l_min_) throw std::domain_error("zero-freq TM: bad (m, ell_max)");
  if (!(aspect > 0.0)) throw std::domain_error("zero-freq TM: aspect must be > 0");
  // x -> infinity limit of the finite-xi element; with
  // P_l^m(x) ~ C_lm x^l, C_lm = (2l)!/(2^l l! (l-m)!), the k-integral
  // collapses to Gamma(l1+l2+1) and the Mie power law leaves
  //   entry = exp(f_1 + f_2 + lgamma(l1+l2+1)),
  //   f_l = ln[Lambda_lm l C_lm sqrt(A_l)] + (l + 1/2) ln(R/(2(L+R))).
  const double ln_ratio = std::log(aspect / (2.0 * (1.0 + aspect)));
  f_.resize(n_);
  for (int il = 0; il < n_; ++il) {
    const int l = l_min_ + il;
    const double ln_lambda =
        0.5 * (std::log(2.0 * l + 1.0) - std::log(static_cast<double>(l)) -
               std::log(l + 1.0) + ln_factorial(l - m_) - ln_factorial(l + m_));
    const double ln_c = ln_factorial(2 * l) - l * std::log(2.0) -
                        ln_factorial(l) - ln_factorial(l - m_);
    f_[il] = ln_lambda + std::log(static_cast<double>(l)) + ln_c +
             0.5 * ln_mie_tm_zero(l) + (l + 0.5) * ln_ratio;
  }
}

double ZeroFreqTmKernel::entry(int i, int j) const {
  const int l1 = l_min_ + i, l2 = l_min_ + j;
  return std::exp(f_[i] + f_[j] + ln_factorial(l1 + l2));
}

ZeroFreqTeKernel::ZeroFreqTeKernel(int m, const Geometry& geom, double omega_p,
                                   int ell_max, bool perfect_reflector,
                                   std::size_t quad_order)
    : m_(m),
      l_min_(std::max(1, m)),
      n_(ell_max - std::max(1, m) + 1),
      q_(quad_order ? quad_order : block_quadrature_order(ell_max)) {
  if (m < 0 || ell_max < l_min_) throw std::domain_error("zero-freq TE: bad (m, ell_max)");
  if (!perfect_reflector && !(omega_p > 0.0))
    throw std::domain_error("zero-freq TE: omega_p must be > 0");

  const double dist = geom.center_distance();
  const double y = perfect_reflector ? 0.0 : omega_p * geom.R / speed_of_light;
  const double ln_ratio = std::log(geom.R / (2.0 * dist));
  const auto& rule = gauss_laguerre(q_);

  g_.resize(n_, static_cast<int>(q_));
  ln_d_.resize(n_);
  // Same multipole factors as the TM sector, with the magnetic Mie limit and
  // the k-dependent plasma TE reflection kept inside the t-integral.
  std::vector<double> lnw(q_);
  for (std::size_t iq = 0; iq < q_; ++iq) {
    const double t = rule.nodes[iq];
    double ln_r = 0.0;  // perfect reflector: |r_TE| = 1
    if (!perfect_reflector) {
      const double k = t / (2.0 * dist);
      ln_r = std::log(-fresnel_te_zero_plasma(k, omega_p));
    }
    lnw[iq] = rule.ln_weights[iq] + ln_r;
  }
  for (int il = 0; il < n_; ++il) {
    const int l = l_min_ + il;
    const double ln_lambda =
        0.5 * (std::log(2.0 * l + 1.0) - std::log(static_cast<double>(l)) -
               std::log(l + 1.0) + ln_factorial(l - m_) - ln_factorial(l + m_));
    const double ln_c = ln_factorial(2 * l) - l * std::log(2.0) -
                        ln_factorial(l) - ln_factorial(l - m_);
    const double ln_b = perfect_reflector ? ln_mie_te_zero_pr(l)
                                          : ln_mie_te_zero_plasma(l, y);
    const double base = ln_lambda + std::log(static_cast<double>(l)) + ln_c +
                        0.5 * ln_b + (l + 0.5) * ln_ratio;
    double shift = kNegInf;
    std::vector<double> row(q_);
    for (std::size_t iq = 0; iq < q_; ++iq) {
      row[iq] = l * std::log(rule.nodes[iq]) + 0.5 * lnw[iq];
      shift = std::fmax(shift, row[iq]);
    }
    for (std::size_t iq = 0; iq < q_; ++iq)
      g_(il, static_cast<int>(iq)) = std::exp(row[iq] - shift);
    ln_d_[il] = base + shift;
  }
}

double ZeroFreqTeKernel::entry(int i, int j) const {
  const double dot = strided_dot(g_.row(i).data(), g_.row(j).data(),
                                 static_cast<int>(g_.cols()));
  return scaled_entry(ln_d_[i], ln_d_[j], dot);
}

}  // namespace casimir
