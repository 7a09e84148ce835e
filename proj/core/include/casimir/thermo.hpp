#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casimir/geometry.hpp"
#include "casimir/hodlr.hpp"
#include "casimir/materials.hpp"

namespace casimir {

/// Treatment of the n = 0 Matsubara term.  n >= 1 terms always use the
/// model's eps(i xi_n); only the zero-frequency reflection limits differ.
enum class Prescription { drude, plasma, perfect_reflector };

std::string to_string(Prescription p);

struct Accuracy {
  double matsubara_tol = 1e-9;  // stop n-sum below this relative weight
  int matsubara_min_terms = 10;
  double m_tol = 1e-9;          // stop m-sum below this relative weight
  double eta = 5.0;             // ell_max = max(20, ceil(eta R/L))
  int ell_max_override = 0;     // 0: derive from eta
  std::size_t block_quad_order = 0;  // 0: max(50, ell_max/2)
  std::size_t xi_quad_order = 50;    // T = 0 frequency integral
  bool verify_xi_quadrature = false; // doubling self-check of the xi integral
  int n_cap = 200000;
  // Finite-difference policy for forces: h = max(rel*L, min), five-point
  // stencils, optional half-step consistency check.
  double stencil_rel_step = 1e-3;
  double stencil_min_step = 5e-11;  // 0.05 nm
  bool stencil_check = true;
  double stencil_tol = 1e-4;
};

struct MatsubaraTerm {
  int n;
  double xi;            // rad/s
  double contribution;  // J
  int m_blocks_used;
};

struct MatsubaraLedger {
  double temperature = 0.0;  // K
  std::vector<MatsubaraTerm> terms;
  int n_max_used = 0;
  double tail_estimate = 0.0;  // J, included in the reported free energy
  double zero_freq_tm_part = 0.0;  // J (weight-1/2 applied)
  double zero_freq_te_part = 0.0;  // J
  Prescription prescription = Prescription::perfect_reflector;
  int ell_max = 0;
  int max_m_used = 0;
  bool used_hodlr = false;
};

struct FreeEnergyResult {
  double value = 0.0;  // J, < 0
  MatsubaraLedger ledger;
};

/// Casimir free energy at temperature T > 0:
///   F = k_B T [ 1/2 zero_freq_term + sum_{n>=1} term(xi_n) ] + tail,
///   term(xi) = sum_m w_m log det(1 - M^(m)(xi)),  w_0 = 1, w_{m>0} = 2.
FreeEnergyResult free_energy(const Geometry& geom, const MaterialModel& model,
                             double temperature, Prescription prescription,
                             const Accuracy& acc = {},
                             const SolverConfig& solver = {});

/// Zero-temperature energy, hbar/(2 pi) integral of term(xi) over xi > 0
/// by an exponentially weighted rule in u = 2 xi (L+R)/c.
double free_energy_T0(const Geometry& geom, const MaterialModel& model,
                      const Accuracy& acc = {}, const SolverConfig& solver = {});

/// Zero-frequency TM log-det sum (dimensionless).  The TM mode is perfectly
/// reflected by both surfaces for every metallic prescription, so the value
/// depends on the aspect ratio R/L alone.
double zero_freq_tm(double aspect, int ell_max, const SolverConfig& solver = {},
                    double m_tol = 1e-9);

/// Zero-frequency TE log-det sum for the plasma prescription (depends on
/// omega_p through y = omega_p R / c and the k-dependent TE reflection).
double zero_freq_te_plasma(const Geometry& geom, double omega_p, int ell_max,
                           const SolverConfig& solver = {}, double m_tol = 1e-9);

/// Same for perfect reflectors (the omega_p -> infinity limit).
double zero_freq_te_pr(const Geometry& geom, int ell_max,
                       const SolverConfig& solver = {}, double m_tol = 1e-9);

/// Combined zero-frequency term per prescription (dimensionless log-det sum):
/// Drude: TM only; plasma: TM + TE(omega_p); perfect reflector: TM + TE(PR).
double zero_freq_term(Prescription prescription, const Geometry& geom,
                      double omega_p, int ell_max,
                      const SolverConfig& solver = {}, double m_tol = 1e-9);

struct ForceDiagnostics {
  double stencil_rel_force = 0.0;     // |F_h - F_{h/2}| / |F|
  double stencil_rel_gradient = 0.0;  // same for F'
  int ell_max = 0;
  int n_max_used = 0;
  int max_m_used = 0;
  bool used_hodlr = false;
  double wall_time_s = 0.0;
};

struct InteractionResult {
  double free_energy = 0.0;    // J, < 0
  double force = 0.0;          // N, < 0 (F = -dF/dL, attraction)
  double force_gradient = 0.0; // N/m, > 0 for the configurations probed here
  ForceDiagnostics diagnostics;
};

/// Free energy plus force and force gradient from five-point central
/// stencils on F(L); temperature == nullopt selects the T = 0 integral.
/// The multipole cutoff is frozen at the stencil center so every energy in
/// the stencil shares one truncation.
InteractionResult force_and_gradient(const Geometry& geom,
                                     const MaterialModel& model,
                                     std::optional<double> temperature,
                                     Prescription prescription,
                                     const Accuracy& acc = {},
                                     const SolverConfig& solver = {});

}  // namespace casimir
