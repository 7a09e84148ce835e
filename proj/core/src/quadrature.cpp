#include "casimir/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace casimir {
namespace {

// Evaluates the scaled Laguerre function phi_n(x) = e^{-x/2} L_n(x) by the
// three-term recurrence with periodic renormalization.  phi_n is O(1) in the
// oscillatory region even when L_n itself overflows, so Newton iteration on
// the nodes stays in range for any order.  Returns phi_n / 2^offset terms:
// val_n, val_{n-1} and the accumulated ln renormalization.
struct ScaledLaguerre {
  double pn;      // phi_n   (renormalized)
  double pnm1;    // phi_{n-1}
  double ln_off;  // true phi_n = pn * exp(ln_off - x/2)
};

ScaledLaguerre eval_scaled(std::size_t n, double x) {
  double p0 = 1.0, p1 = 1.0 - x, ln_off = 0.0;
  if (n == 0) return {p0, 0.0, 0.0};
  for (std::size_t k = 1; k < n; ++k) {
    double p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    double a = std::fabs(p1);
    if (a > 1e200) {
      p0 /= a;
      p1 /= a;
      ln_off += std::log(a);
    } else if (a > 0.0 && a < 1e-200) {
      p0 /= a;
      p1 /= a;
      ln_off += std::log(a);
    }
  }
  return {p1, p0, ln_off};
}

std::unique_ptr<QuadratureRule> build_laguerre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("quadrature order must be positive");
  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes.resize(n);
  rule->ln_weights.resize(n);
  rule->modified_weights.resize(n);

  double x = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // Stroud-Secrest style initial guesses, then Newton.
    if (i == 0) {
      x = 3.0 / (1.0 + 2.4 * n);
    } else if (i == 1) {
      x += 15.0 / (1.0 + 2.5 * n);
    } else {
      const double ai = i - 1.0;
      x += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (x - rule->nodes[i - 2]);
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto s = eval_scaled(n, x);
      // L_n'(x) = n (L_n - L_{n-1}) / x, same relation for the scaled phi
      // up to the common e^{-x/2} shift handled implicitly in the ratio.
      pp = n * (s.pn - s.pnm1) / x;
      const double dx = s.pn / pp;
      x -= dx;
      if (std::fabs(dx) <= 1e-15 * std::fmax(x, 1.0)) break;
    }
    const auto s = eval_scaled(n + 1, x);
    // w_i = x / ((n+1)^2 L_{n+1}(x)^2); with phi = e^{-x/2} L this becomes
    // ln w = ln x - 2 ln(n+1) - 2 (ln|phi_{n+1}| + x/2) + x... collapsing to:
    const double ln_phi = std::log(std::fabs(s.pn)) + s.ln_off;  // ln(e^{x/2} L_{n+1}) - x... phi scaled
    // true L_{n+1}(x) = s.pn * exp(s.ln_off) * e^{x/2}
    const double lnL = ln_phi + 0.5 * x;
    const double lnw = std::log(x) - 2.0 * std::log(n + 1.0) - 2.0 * lnL;
    rule->nodes[i] = x;
    rule->ln_weights[i] = lnw;
    rule->modified_weights[i] = std::exp(lnw + x);
  }
  return rule;
}

std::mutex cache_mutex;
std::map<std::size_t, std::unique_ptr<QuadratureRule>>& cache() {
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> c;
  return c;
}

}  // namespace

const QuadratureRule& gauss_laguerre(std::size_t order) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto& c = cache();
  auto it = c.find(order);
  if (it == c.end()) it = c.emplace(order, build_laguerre(order)).first;
  return *it->second;
}

std::size_t block_quadrature_order(int ell_max) {
  return std::max<std::size_t>(50, static_cast<std::size_t>(ell_max) / 2);
}

}  // namespace casimir
