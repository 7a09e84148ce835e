#pragma once

#include <optional>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/materials.hpp"
#include "casimir/thermo.hpp"

namespace casimir {

/// Lifshitz free energy per unit area for parallel plates at gap L:
///   (k_B T / 2 pi) [ I(0)/2 + sum_{n>=1} I(xi_n) ],
///   I(xi) = int_0^inf dk k sum_p ln(1 - r_p^2(k, i xi) e^{-2 kappa L}),
/// with the n = 0 reflection limits set by the prescription (Drude: TM only,
/// plasma: TM + plasma TE limit, perfect reflector: both ideal).
/// temperature == nullopt selects the T = 0 integral (hbar/2pi over xi).
/// The k integral uses the substitution t = 2 kappa L on an exponentially
/// weighted rule, order 80 doubled until 1e-9 self-agreement.
double lifshitz_pp(double L, std::optional<double> temperature,
                   const MaterialModel& model, Prescription prescription,
                   const Accuracy& acc = {});

struct PfaReference {
  double free_energy_per_area = 0.0;  // J/m^2, < 0
  double pfa_force = 0.0;             // N, < 0
  double pfa_gradient = 0.0;          // N/m, > 0
};

/// F_PFA = 2 pi R F_pp(L)/A and its L-derivative, by the same five-point
/// stencil policy the sphere-plane forces use.
PfaReference pfa_reference(const Geometry& geom, std::optional<double> temperature,
                           const MaterialModel& model, Prescription prescription,
                           const Accuracy& acc = {});

struct BetaEstimate {
  double L = 0.0;
  double R = 0.0;
  double beta_like = 0.0;        // (R/L)(F / F_PFA - 1)
  double beta_prime_like = 0.0;  // (R/L)(F'/ F'_PFA - 1)
};

BetaEstimate beta_estimates(const Geometry& geom, std::optional<double> temperature,
                            const MaterialModel& model, Prescription prescription,
                            const Accuracy& acc = {}, const SolverConfig& solver = {});

struct BetaFit {
  double intercept = 0.0;  // extrapolation to L/R -> 0
  double slope = 0.0;
  double max_residual = 0.0;  // departure from the linear-in-L/R form
};

/// Least-squares fit of beta-like values against L/R.  The residual is
/// reported, not modelled: corrections that are not of the linear form show
/// up there instead of being silently absorbed.
BetaFit fit_beta_vs_aspect(const std::vector<BetaEstimate>& points, bool prime);

/// Experimental bound on the gradient correction: |beta'| < 0.4 at 95%
/// confidence for gaps in [150, 300] nm.
bool violates_gradient_bound(double beta_prime_like);

}  // namespace casimir
