#include "casimir/hodlr.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

namespace casimir {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Rank-revealing cross approximation of the off-diagonal block
/// B = -M(rows lo1..hi1, cols lo2..hi2) of 1 - M.  Partial pivoting: each
/// step expands the row of the current max-magnitude residual column entry,
/// first-max tie-breaking keeps the factorization deterministic.
struct AcaResult {
  MatrixXd u;  // n1 x r
  MatrixXd v;  // n2 x r
  bool truncated = false;  // rank cap hit
};

AcaResult aca_block(const MatrixKernel& m, int lo1, int n1, int lo2, int n2,
                    double tol, int rank_cap) {
  AcaResult res;
  const int max_rank = std::min({rank_cap, n1, n2});
  std::vector<VectorXd> us, vs;
  std::vector<bool> row_used(n1, false);
  double fro2 = 0.0;  // running ||approx||_F^2 estimate

  int i_piv = 0;
  int consecutive_null = 0;
  VectorXd row(n2), col(n1);
  while (static_cast<int>(us.size()) < max_rank) {
    m.fill_row(lo1 + i_piv, lo2, n2, row.data());
    row = -row;
    for (std::size_t k = 0; k < us.size(); ++k) row -= us[k](i_piv) * vs[k];
    row_used[i_piv] = true;

    int j_piv = 0;
    row.cwiseAbs().maxCoeff(&j_piv);
    const double piv = row(j_piv);
    if (piv == 0.0 || !std::isfinite(piv)) {
      // Residual row numerically empty: probe a few more rows, then accept.
      if (++consecutive_null > 3) break;
      int next = -1;
      for (int i = 0; i < n1; ++i)
        if (!row_used[i]) { next = i; break; }
      if (next < 0) break;
      i_piv = next;
      continue;
    }
    consecutive_null = 0;

    m.fill_row(lo2 + j_piv, lo1, n1, col.data());  // symmetric: col = B(:,j)
    col = -col;
    for (std::size_t k = 0; k < us.size(); ++k) col -= vs[k](j_piv) * us[k];
    col /= piv;

    us.emplace_back(col);
    vs.emplace_back(row);

    const double nu2 = col.squaredNorm(), nv2 = row.squaredNorm();
    double cross = 0.0;
    for (std::size_t k = 0; k + 1 < us.size(); ++k)
      cross += us[k].dot(col) * vs[k].dot(row);
    fro2 += 2.0 * cross + nu2 * nv2;
    if (nu2 * nv2 <= tol * tol * std::fmax(fro2, 1e-300)) break;

    // Next pivot row: max |u| over unused rows.
    int next = -1;
    double best = -1.0;
    for (int i = 0; i < n1; ++i) {
      if (row_used[i]) continue;
      const double a = std::fabs(col(i));
      if (a > best) { best = a; next = i; }
    }
    if (next < 0) break;
    i_piv = next;
  }

  const int r = static_cast<int>(us.size());
  res.truncated = (r == max_rank) && (r == rank_cap) && rank_cap < std::min(n1, n2);
  res.u.resize(n1, r);
  res.v.resize(n2, r);
  for (int k = 0; k < r; ++k) {
    res.u.col(k) = us[k];
    res.v.col(k) = vs[k];
  }
  return res;
}

struct Node {
  int lo = 0, n = 0;
  bool leaf = false;
  Eigen::LDLT<MatrixXd> dense;                 // leaf factor of 1 - M
  std::unique_ptr<Node> left, right;
  MatrixXd u, v;                               // off-diag factors (upper block)
  MatrixXd z1, z2;                             // A11^-1 u, A22^-1 v
  Eigen::PartialPivLU<MatrixXd> core;          // LU of I + C
  double core_logdet = 0.0;
  bool fallback_dense = false;
};

struct BuildContext {
  const MatrixKernel* m;
  SolverConfig cfg;
  double logdet = 0.0;
  RankStats ranks;
};

void solve_inplace(const Node& node, Eigen::Ref<MatrixXd> b);

std::unique_ptr<Node> factorize(BuildContext& ctx, int lo, int n) {
  auto node = std::make_unique<Node>();
  node->lo = lo;
  node->n = n;
  if (n <= 2 * ctx.cfg.leaf_size) {
    node->leaf = true;
    MatrixXd a(n, n);
    VectorXd buf(n);
    for (int i = 0; i < n; ++i) {
      ctx.m->fill_row(lo + i, lo, n, buf.data());
      a.row(i) = -buf.transpose();
      a(i, i) += 1.0;
    }
    node->dense.compute(a);
    const auto& d = node->dense.vectorD();
    for (int i = 0; i < n; ++i) {
      if (!(d(i) > 0.0))
        throw std::runtime_error(
            "logdet: 1 - M not positive definite (non-physical input or "
            "insufficient quadrature)");
      ctx.logdet += std::log(d(i));
    }
    return node;
  }

  const int h = n / 2;
  auto aca = aca_block(*ctx.m, lo, h, lo + h, n - h, ctx.cfg.aca_tol,
                       ctx.cfg.rank_cap);
  if (aca.truncated) {
    // Rank cap reached: materialize the block exactly (u = block, v = I).
    const int n2 = n - h;
    aca.u.resize(h, n2);
    VectorXd buf(n2);
    for (int i = 0; i < h; ++i) {
      ctx.m->fill_row(lo + i, lo + h, n2, buf.data());
      aca.u.row(i) = -buf.transpose();
    }
    aca.v = MatrixXd::Identity(n2, n2);
    node->fallback_dense = true;
    ctx.ranks.dense_fallbacks++;
  }
  const int r = static_cast<int>(aca.u.cols());
  ctx.ranks.blocks++;
  if (ctx.ranks.blocks == 1) {
    ctx.ranks.min_rank = ctx.ranks.max_rank = r;
    ctx.ranks.mean_rank = r;
  } else {
    ctx.ranks.min_rank = std::min(ctx.ranks.min_rank, r);
    ctx.ranks.max_rank = std::max(ctx.ranks.max_rank, r);
    ctx.ranks.mean_rank += (r - ctx.ranks.mean_rank) / ctx.ranks.blocks;
  }

  node->left = factorize(ctx, lo, h);
  node->right = factorize(ctx, lo + h, n - h);
  node->u = std::move(aca.u);
  node->v = std::move(aca.v);

  // Woodbury update: A = D + X Y with X = diag(u, v), Y = [[0, v^T],[u^T, 0]].
  node->z1 = node->u;
  solve_inplace(*node->left, node->z1);
  node->z2 = node->v;
  solve_inplace(*node->right, node->z2);

  if (r == 0) return node;
  MatrixXd c = MatrixXd::Zero(2 * r, 2 * r);
  c.topRightCorner(r, r) = node->v.transpose() * node->z2;
  c.bottomLeftCorner(r, r) = node->u.transpose() * node->z1;
  c.diagonal().array() += 1.0;
  node->core.compute(c);
  double ld = 0.0;
  double sign = 1.0;
  const auto& lu = node->core.matrixLU();
  for (int i = 0; i < 2 * r; ++i) {
    const double p = lu(i, i);
    if (p == 0.0)
      throw std::runtime_error("logdet: singular Woodbury core");
    if (p < 0.0) sign = -sign;
    ld += std::log(std::fabs(p));
  }
  sign *= static_cast<double>(node->core.permutationP().determinant());
  if (sign <= 0.0)
    throw std::runtime_error(
        "logdet: 1 - M not positive definite (non-physical input or "
        "insufficient quadrature)");
  node->core_logdet = ld;
  ctx.logdet += ld;
  return node;
}

void solve_inplace(const Node& node, Eigen::Ref<MatrixXd> b) {
  if (node.leaf) {
    node.dense.solveInPlace(b);
    return;
  }
  const int h = node.left->n;
  solve_inplace(*node.left, b.topRows(h));
  solve_inplace(*node.right, b.bottomRows(node.n - h));
  const int r = static_cast<int>(node.u.cols());
  if (r == 0) return;
  MatrixXd y(2 * r, b.cols());
  y.topRows(r) = node.v.transpose() * b.bottomRows(node.n - h);
  y.bottomRows(r) = node.u.transpose() * b.topRows(h);
  node.core.solveInPlace(y);
  b.topRows(h) -= node.z1 * y.topRows(r);
  b.bottomRows(node.n - h) -= node.z2 * y.bottomRows(r);
}

}  // namespace

LogDetResult logdet_dense(const MatrixKernel& m) {
  const int n = m.dim();
  if (n < 1) throw std::invalid_argument("logdet: empty matrix");
  MatrixXd a(n, n);
  VectorXd buf(n);
  for (int i = 0; i < n; ++i) {
    m.fill_row(i, 0, n, buf.data());
    a.row(i) = -buf.transpose();
    a(i, i) += 1.0;
  }
  Eigen::LDLT<MatrixXd> ldlt(a);
  double value = 0.0;
  const auto& d = ldlt.vectorD();
  for (int i = 0; i < n; ++i) {
    if (!(d(i) > 0.0))
      throw std::runtime_error(
          "logdet: 1 - M not positive definite (non-physical input or "
          "insufficient quadrature)");
    value += std::log(d(i));
  }
  LogDetResult res;
  res.value = value;
  res.method = LogDetResult::Method::dense;
  res.estimated_error = 1e-15 * n * std::fabs(value);
  res.entries_read = static_cast<std::uint64_t>(n) * n;
  return res;
}

LogDetResult logdet_hodlr(const MatrixKernel& m, const SolverConfig& cfg) {
  const int n = m.dim();
  if (n < 1) throw std::invalid_argument("logdet: empty matrix");
  if (!(cfg.aca_tol > 0.0) || !(cfg.aca_tol < 1e-3))
    throw std::invalid_argument("logdet: aca_tol must lie in (0, 1e-3)");
  if (cfg.leaf_size < 16)
    throw std::invalid_argument("logdet: leaf_size must be >= 16");
  CountingKernel counted(m);
  BuildContext ctx{&counted, cfg, 0.0, {}};
  factorize(ctx, 0, n);
  LogDetResult res;
  res.value = ctx.logdet;
  res.method = LogDetResult::Method::hodlr;
  res.estimated_error = 10.0 * cfg.aca_tol * std::fabs(ctx.logdet);
  res.ranks = ctx.ranks;
  res.entries_read = counted.count();
  return res;
}

LogDetResult logdet(const MatrixKernel& m, const SolverConfig& cfg) {
  if (m.dim() <= cfg.dense_threshold) return logdet_dense(m);
  return logdet_hodlr(m, cfg);
}

}  // namespace casimir
