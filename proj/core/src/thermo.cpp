#include "casimir/thermo.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/executor.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {
namespace {

struct MSumResult {
  double value = 0.0;  // sum_m w_m logdet(1 - M^(m))
  int max_m_used = 0;
  bool used_hodlr = false;
};

/// Weighted sum over the angular index with prefix truncation: blocks are
/// evaluated in chunks in parallel, but the cut is decided on the ordered
/// prefix, so the result does not depend on scheduling.  Truncation: first m
/// >= m_min with two consecutive contributions below tol * |running sum|.
template <typename KernelFactory>
MSumResult m_sum(int ell_max, double m_tol, const SolverConfig& solver,
                 const KernelFactory& make_kernel) {
  MSumResult out;
  auto& exec = Executor::shared();
  const int chunk = static_cast<int>(std::max<std::size_t>(2 * (exec.workers() + 1), 4));
  constexpr int m_min = 4;
  int below_count = 0;
  for (int m0 = 0; m0 <= ell_max && below_count < 2; m0 += chunk) {
    const int count = std::min(chunk, ell_max - m0 + 1);
    std::vector<double> vals(count, 0.0);
    std::vector<char> hodlr_used(count, 0);
    exec.parallel_for(count, [&](std::size_t idx) {
      const int m = m0 + static_cast<int>(idx);
      auto kernel = make_kernel(m);
      const auto r = logdet(*kernel, solver);
      vals[idx] = r.value;
      hodlr_used[idx] = r.method == LogDetResult::Method::hodlr ? 1 : 0;
    });
    for (int idx = 0; idx < count; ++idx) {
      const int m = m0 + idx;
      const double w = (m == 0) ? 1.0 : 2.0;
      const double term = w * vals[idx];
      out.value += term;
      out.max_m_used = m;
      out.used_hodlr = out.used_hodlr || hodlr_used[idx];
      if (m >= m_min && std::fabs(term) < m_tol * std::fabs(out.value)) {
        if (++below_count >= 2) break;
      } else {
        below_count = 0;
      }
    }
  }
  return out;
}

struct TermResult {
  double value = 0.0;
  int max_m_used = 0;
  bool used_hodlr = false;
};

/// term(xi) = sum_m w_m logdet(1 - M^(m)(xi)) for one positive frequency.
TermResult frequency_term(double xi, const Geometry& geom,
                          const MaterialModel& model, int ell_max,
                          const Accuracy& acc, const SolverConfig& solver) {
  const auto r = m_sum(ell_max, acc.m_tol, solver, [&](int m) {
    return block_kernel(m, xi, geom, model, ell_max, acc.block_quad_order);
  });
  return {r.value, r.max_m_used, r.used_hodlr};
}

int resolve_ell_max(const Geometry& geom, const Accuracy& acc) {
  if (acc.ell_max_override > 0) return acc.ell_max_override;
  return choose_ell_max(geom, acc.eta);
}

double prescription_omega_p(Prescription p, const MaterialModel& model) {
  if (p != Prescription::plasma) return 0.0;
  const double wp = model.low_freq_omega_p();
  if (!(wp > 0.0))
    throw std::invalid_argument(
        "plasma prescription requires a model with a plasma frequency");
  return wp;
}

}  // namespace

std::string to_string(Prescription p) {
  switch (p) {
    case Prescription::drude: return "drude";
    case Prescription::plasma: return "plasma";
    case Prescription::perfect_reflector: return "pr";
  }
  return "?";
}

double zero_freq_tm(double aspect, int ell_max, const SolverConfig& solver,
                    double m_tol) {
  if (!(aspect > 0.0)) throw std::domain_error("zero_freq_tm: aspect must be > 0");
  return m_sum(ell_max, m_tol, solver, [&](int m) {
    return std::make_unique<ZeroFreqTmKernel>(m, aspect, ell_max);
  }).value;
}

double zero_freq_te_plasma(const Geometry& geom, double omega_p, int ell_max,
                           const SolverConfig& solver, double m_tol) {
  if (!(omega_p > 0.0))
    throw std::domain_error("zero_freq_te_plasma: omega_p must be > 0");
  return m_sum(ell_max, m_tol, solver, [&](int m) {
    return std::make_unique<ZeroFreqTeKernel>(m, geom, omega_p, ell_max, false);
  }).value;
}

double zero_freq_te_pr(const Geometry& geom, int ell_max,
                       const SolverConfig& solver, double m_tol) {
  return m_sum(ell_max, m_tol, solver, [&](int m) {
    return std::make_unique<ZeroFreqTeKernel>(m, geom, 0.0, ell_max, true);
  }).value;
}

double zero_freq_term(Prescription prescription, const Geometry& geom,
                      double omega_p, int ell_max, const SolverConfig& solver,
                      double m_tol) {
  const double tm = zero_freq_tm(geom.aspect(), ell_max, solver, m_tol);
  switch (prescription) {
    case Prescription::drude:
      return tm;  // no zero-frequency TE contribution for a dissipative metal
    case Prescription::plasma:
      return tm + zero_freq_te_plasma(geom, omega_p, ell_max, solver, m_tol);
    case Prescription::perfect_reflector:
      return tm + zero_freq_te_pr(geom, ell_max, solver, m_tol);
  }
  throw std::logic_error("zero_freq_term: bad prescription");
}

FreeEnergyResult free_energy(const Geometry& geom, const MaterialModel& model,
                             double temperature, Prescription prescription,
                             const Accuracy& acc, const SolverConfig& solver) {
  if (!(temperature > 0.0))
    throw std::domain_error("free_energy: temperature must be > 0 (use free_energy_T0)");
  const int ell_max = resolve_ell_max(geom, acc);
  const double kt = boltzmann * temperature;

  FreeEnergyResult out;
  auto& ledger = out.ledger;
  ledger.temperature = temperature;
  ledger.prescription = prescription;
  ledger.ell_max = ell_max;

  // n = 0, weight 1/2; polarizations decouple, TM universal, TE per model.
  const double wp = prescription_omega_p(prescription, model);
  const double tm0 = zero_freq_tm(geom.aspect(), ell_max, solver, acc.m_tol);
  double te0 = 0.0;
  if (prescription == Prescription::plasma)
    te0 = zero_freq_te_plasma(geom, wp, ell_max, solver, acc.m_tol);
  else if (prescription == Prescription::perfect_reflector)
    te0 = zero_freq_te_pr(geom, ell_max, solver, acc.m_tol);
  ledger.zero_freq_tm_part = 0.5 * kt * tm0;
  ledger.zero_freq_te_part = 0.5 * kt * te0;

  double sum = 0.5 * (tm0 + te0);
  for (int n = 1; n <= acc.n_cap; ++n) {
    const double xi = matsubara_frequency(n, temperature);
    const auto t = frequency_term(xi, geom, model, ell_max, acc, solver);
    sum += t.value;
    ledger.terms.push_back({n, xi, kt * t.value, t.max_m_used});
    ledger.max_m_used = std::max(ledger.max_m_used, t.max_m_used);
    ledger.used_hodlr = ledger.used_hodlr || t.used_hodlr;
    ledger.n_max_used = n;
    if (n >= acc.matsubara_min_terms &&
        std::fabs(t.value) < acc.matsubara_tol * std::fabs(sum))
      break;
    if (n == acc.n_cap)
      throw std::runtime_error("free_energy: Matsubara sum did not converge");
  }

  // Geometric tail from the last terms; included in the reported energy and
  // recorded in the ledger.
  double tail = 0.0;
  const auto& ts = ledger.terms;
  if (ts.size() >= 3) {
    const double t1 = std::fabs(ts[ts.size() - 1].contribution) / kt;
    const double t2 = std::fabs(ts[ts.size() - 2].contribution) / kt;
    const double t3 = std::fabs(ts[ts.size() - 3].contribution) / kt;
    if (t2 > 0.0 && t3 > 0.0) {
      const double r = 0.5 * (t1 / t2 + t2 / t3);
      if (r > 0.0 && r < 0.999) tail = -t1 * r / (1.0 - r);
    }
  }
  ledger.tail_estimate = kt * tail;

  out.value = kt * (sum + tail);
  if (!(out.value < 0.0))
    throw std::runtime_error("free_energy: non-negative result (non-physical)");
  return out;
}

double free_energy_T0(const Geometry& geom, const MaterialModel& model,
                      const Accuracy& acc, const SolverConfig& solver) {
  const int ell_max = resolve_ell_max(geom, acc);
  const double dist = geom.center_distance();

  auto integrate = [&](std::size_t order) {
    const auto& rule = gauss_laguerre(order);
    // F = hbar/(2 pi) int dxi term(xi);  xi = (c / 2(L+R)) u.
    double acc_sum = 0.0;
    for (std::size_t i = 0; i < order; ++i) {
      const double u = rule.nodes[i];
      const double xi = 0.5 * speed_of_light * u / dist;
      const auto t = frequency_term(xi, geom, model, ell_max, acc, solver);
      acc_sum += rule.modified_weights[i] * t.value;
    }
    return (hbar / (2.0 * pi)) * (0.5 * speed_of_light / dist) * acc_sum;
  };

  double value = integrate(acc.xi_quad_order);
  if (acc.verify_xi_quadrature) {
    const double refined = integrate(2 * acc.xi_quad_order);
    if (std::fabs(refined - value) > 1e-8 * std::fabs(refined)) {
      std::ostringstream os;
      os << "free_energy_T0: frequency quadrature not converged at order "
         << acc.xi_quad_order << " (rel change "
         << std::fabs(refined - value) / std::fabs(refined) << ")";
      throw std::runtime_error(os.str());
    }
    value = refined;
  }
  if (!(value < 0.0))
    throw std::runtime_error("free_energy_T0: non-negative result");
  return value;
}

InteractionResult force_and_gradient(const Geometry& geom,
                                     const MaterialModel& model,
                                     std::optional<double> temperature,
                                     Prescription prescription,
                                     const Accuracy& acc,
                                     const SolverConfig& solver) {
  const auto t_start = std::chrono::steady_clock::now();
  Accuracy frozen = acc;
  frozen.ell_max_override = resolve_ell_max(geom, acc);

  InteractionResult out;
  out.diagnostics.ell_max = frozen.ell_max_override;

  auto energy = [&](double L) {
    const Geometry g{geom.R, L};
    if (temperature) {
      const auto r = free_energy(g, model, *temperature, prescription, frozen, solver);
      out.diagnostics.n_max_used = std::max(out.diagnostics.n_max_used, r.ledger.n_max_used);
      out.diagnostics.max_m_used = std::max(out.diagnostics.max_m_used, r.ledger.max_m_used);
      out.diagnostics.used_hodlr = out.diagnostics.used_hodlr || r.ledger.used_hodlr;
      return r.value;
    }
    return free_energy_T0(g, model, frozen, solver);
  };

  const double L = geom.L;
  const double h = std::fmax(acc.stencil_rel_step * L, acc.stencil_min_step);
  const double e_m2 = energy(L - 2 * h), e_m1 = energy(L - h), e_0 = energy(L);
  const double e_p1 = energy(L + h), e_p2 = energy(L + 2 * h);

  out.free_energy = e_0;
  out.force = -(e_m2 - 8.0 * e_m1 + 8.0 * e_p1 - e_p2) / (12.0 * h);
  out.force_gradient =
      -(-e_m2 + 16.0 * e_m1 - 30.0 * e_0 + 16.0 * e_p1 - e_p2) / (12.0 * h * h);

  if (acc.stencil_check) {
    const double e_mh = energy(L - 0.5 * h), e_ph = energy(L + 0.5 * h);
    const double f_half = -(e_m1 - 8.0 * e_mh + 8.0 * e_ph - e_p1) / (6.0 * h);
    const double fp_half =
        -(-e_m1 + 16.0 * e_mh - 30.0 * e_0 + 16.0 * e_ph - e_p1) / (3.0 * h * h);
    out.diagnostics.stencil_rel_force =
        std::fabs(f_half - out.force) / std::fabs(out.force);
    out.diagnostics.stencil_rel_gradient =
        std::fabs(fp_half - out.force_gradient) / std::fabs(out.force_gradient);
    if (out.diagnostics.stencil_rel_force > acc.stencil_tol ||
        out.diagnostics.stencil_rel_gradient > acc.stencil_tol) {
      std::ostringstream os;
      os << "force stencil inconsistent (dF=" << out.diagnostics.stencil_rel_force
         << ", dF'=" << out.diagnostics.stencil_rel_gradient
         << "); tighten the energy tolerances";
      throw std::runtime_error(os.str());
    }
  }

  out.diagnostics.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace casimir
