#include "casimir/pfa.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {
namespace {

constexpr double kZeta3 = 1.2020569031595942854;

/// I(xi) via t = 2 kappa L, t in [tau, inf), tau = 2 xi L / c:
///   I = (1/4L^2) int_0^inf ds (tau+s) sum_p ln(1 - r_p^2 e^{-(tau+s)}).
double plate_integral(double xi, double L, const MaterialModel& model,
                      std::size_t order) {
  const double tau = 2.0 * xi * L / speed_of_light;
  const auto& rule = gauss_laguerre(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.order(); ++i) {
    const double t = tau + rule.nodes[i];
    const double k =
        std::sqrt(std::fmax(t * t - tau * tau, 0.0)) / (2.0 * L);
    const auto fr = fresnel(k, xi, model);
    const double e = std::exp(-t);
    const double f =
        std::log1p(-fr.r_tm * fr.r_tm * e) + std::log1p(-fr.r_te * fr.r_te * e);
    sum += rule.modified_weights[i] * t * f;
  }
  return sum / (4.0 * L * L);
}

double plate_integral_converged(double xi, double L, const MaterialModel& model) {
  std::size_t order = 80;
  double val = plate_integral(xi, L, model, order);
  for (int pass = 0; pass < 4; ++pass) {
    const double refined = plate_integral(xi, L, model, 2 * order);
    if (std::fabs(refined - val) <= 1e-9 * std::fabs(refined)) return refined;
    order *= 2;
    val = refined;
  }
  throw std::runtime_error("lifshitz_pp: k-quadrature did not converge");
}

/// Zero-frequency integrals.  TM with r = 1 has the closed form
/// int k ln(1 - e^{-2kL}) dk = -zeta(3)/(4 L^2).
double plate_zero_term(double L, Prescription prescription, double omega_p) {
  const double tm = -kZeta3 / (4.0 * L * L);
  switch (prescription) {
    case Prescription::drude:
      return tm;
    case Prescription::perfect_reflector:
      return 2.0 * tm;
    case Prescription::plasma: {
      const std::size_t order = 160;
      const auto& rule = gauss_laguerre(order);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.order(); ++i) {
        const double t = rule.nodes[i];
        const double k = t / (2.0 * L);
        const double r = fresnel_te_zero_plasma(k, omega_p);
        sum += rule.modified_weights[i] * t * std::log1p(-r * r * std::exp(-t));
      }
      return tm + sum / (4.0 * L * L);
    }
  }
  throw std::logic_error("plate_zero_term: bad prescription");
}

double plasma_wp_or_throw(Prescription p, const MaterialModel& model) {
  if (p != Prescription::plasma) return 0.0;
  const double wp = model.low_freq_omega_p();
  if (!(wp > 0.0))
    throw std::invalid_argument(
        "plasma prescription requires a model with a plasma frequency");
  return wp;
}

}  // namespace

double lifshitz_pp(double L, std::optional<double> temperature,
                   const MaterialModel& model, Prescription prescription,
                   const Accuracy& acc) {
  if (!(L > 0.0)) throw std::domain_error("lifshitz_pp: L must be > 0");
  const double wp = plasma_wp_or_throw(prescription, model);

  if (!temperature) {
    // hbar/(4 pi^2) int_0^inf dxi I(xi);  xi = (c / 2L) v.
    auto integrate = [&](std::size_t order) {
      const auto& rule = gauss_laguerre(order);
      double sum = 0.0;
      for (std::size_t i = 0; i < rule.order(); ++i) {
        const double xi = 0.5 * speed_of_light * rule.nodes[i] / L;
        sum += rule.modified_weights[i] * plate_integral_converged(xi, L, model);
      }
      return hbar / (4.0 * pi * pi) * (0.5 * speed_of_light / L) * sum;
    };
    std::size_t order = std::max<std::size_t>(acc.xi_quad_order, 50);
    double val = integrate(order);
    for (int pass = 0; pass < 4; ++pass) {
      const double refined = integrate(2 * order);
      if (std::fabs(refined - val) <= 1e-9 * std::fabs(refined)) return refined;
      order *= 2;
      val = refined;
    }
    throw std::runtime_error("lifshitz_pp: frequency quadrature did not converge");
  }

  const double T = *temperature;
  if (!(T > 0.0)) throw std::domain_error("lifshitz_pp: temperature must be > 0");
  const double kt = boltzmann * T;
  double sum = 0.5 * plate_zero_term(L, prescription, wp);
  double prev2 = 0.0, prev1 = 0.0;
  int n = 1;
  for (;; ++n) {
    const double xi = matsubara_frequency(n, T);
    const double term = plate_integral_converged(xi, L, model);
    sum += term;
    if (n >= acc.matsubara_min_terms &&
        std::fabs(term) < acc.matsubara_tol * std::fabs(sum)) {
      // geometric tail from the last ratios
      if (prev1 != 0.0 && prev2 != 0.0) {
        const double r = 0.5 * (std::fabs(term / prev1) + std::fabs(prev1 / prev2));
        if (r > 0.0 && r < 0.999) sum -= std::fabs(term) * r / (1.0 - r);
      }
      break;
    }
    prev2 = prev1;
    prev1 = term;
    if (n > 1000000)
      throw std::runtime_error("lifshitz_pp: Matsubara sum did not converge");
  }
  return kt / (2.0 * pi) * sum;
}

PfaReference pfa_reference(const Geometry& geom, std::optional<double> temperature,
                           const MaterialModel& model, Prescription prescription,
                           const Accuracy& acc) {
  const double L = geom.L;
  const double h = std::fmax(acc.stencil_rel_step * L, acc.stencil_min_step);
  auto fpp = [&](double gap) {
    return lifshitz_pp(gap, temperature, model, prescription, acc);
  };
  const double e_m2 = fpp(L - 2 * h), e_m1 = fpp(L - h), e_0 = fpp(L);
  const double e_p1 = fpp(L + h), e_p2 = fpp(L + 2 * h);
  const double d1 = (e_m2 - 8.0 * e_m1 + 8.0 * e_p1 - e_p2) / (12.0 * h);

  PfaReference out;
  out.free_energy_per_area = e_0;
  out.pfa_force = 2.0 * pi * geom.R * e_0;
  out.pfa_gradient = -2.0 * pi * geom.R * d1;
  return out;
}

BetaEstimate beta_estimates(const Geometry& geom, std::optional<double> temperature,
                            const MaterialModel& model, Prescription prescription,
                            const Accuracy& acc, const SolverConfig& solver) {
  const auto exact = force_and_gradient(geom, model, temperature, prescription,
                                        acc, solver);
  const auto ref = pfa_reference(geom, temperature, model, prescription, acc);
  BetaEstimate b;
  b.L = geom.L;
  b.R = geom.R;
  b.beta_like = geom.aspect() * (exact.force / ref.pfa_force - 1.0);
  b.beta_prime_like =
      geom.aspect() * (exact.force_gradient / ref.pfa_gradient - 1.0);
  return b;
}

BetaFit fit_beta_vs_aspect(const std::vector<BetaEstimate>& points, bool prime) {
  if (points.size() < 2)
    throw std::invalid_argument("fit_beta_vs_aspect: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = p.L / p.R;
    const double y = prime ? p.beta_prime_like : p.beta_like;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  BetaFit fit;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (const auto& p : points) {
    const double x = p.L / p.R;
    const double y = prime ? p.beta_prime_like : p.beta_like;
    fit.max_residual =
        std::fmax(fit.max_residual, std::fabs(y - fit.intercept - fit.slope * x));
  }
  return fit;
}

bool violates_gradient_bound(double beta_prime_like) {
  return std::fabs(beta_prime_like) >= 0.4;
}

}  // namespace casimir
