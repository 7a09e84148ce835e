#pragma once

#include <cstddef>
#include <vector>

namespace casimir {

/// Gauss-Laguerre rule for integrals of the form  int_0^inf e^{-t} f(t) dt.
///
/// Weights decay like e^{-t_i} and underflow double precision beyond order
/// ~170, so they are stored as logarithms.  modified_weights holds
/// w_i e^{+t_i}, which stays O(1) at any order and serves integrands that
/// carry their own exponential decay.
struct QuadratureRule {
  std::vector<double> nodes;             // ascending
  std::vector<double> ln_weights;        // ln w_i
  std::vector<double> modified_weights;  // w_i e^{t_i}
  std::size_t order() const { return nodes.size(); }
};

/// Shared, cached Gauss-Laguerre rule of the given order (thread-safe).
const QuadratureRule& gauss_laguerre(std::size_t order);

/// Quadrature order used for round-trip block assembly at a given multipole
/// cutoff: the Legendre factors push the integrand mass out to t ~ 2 l_max,
/// which order ~ l_max/2 covers.
std::size_t block_quadrature_order(int ell_max);

}  // namespace casimir
