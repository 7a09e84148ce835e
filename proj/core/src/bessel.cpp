#include "casimir/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "casimir/constants.hpp"

namespace casimir {
namespace {

constexpr double kMillerCap = 5.0e4;  // switch to uniform asymptotics above

void check_domain(int l, double x) {
  if (!(x > 0.0)) throw std::domain_error("modified Bessel: argument must be > 0");
  if (l < 0) throw std::domain_error("modified Bessel: order must be >= 0");
}

/// Downward ratio pass r_l = i_{l+1}(z)/i_l(z); backward is the stable
/// direction for I.  Start depth covers both the l_max > z and z > l_max
/// regimes (contraction only sets in for index > ~z).
std::vector<double> i_ratios(int l_max, double z) {
  const long start =
      static_cast<long>(l_max) + 60 +
      static_cast<long>(1.4 * std::sqrt(z + 1.0) + 0.55 * std::min(z, 2.0 * kMillerCap));
  std::vector<double> r(l_max + 1);
  double f = 0.0;
  for (long l = start; l >= 0; --l) {
    f = 1.0 / ((2.0 * l + 3.0) / z + f);
    if (l <= l_max) r[l] = f;
  }
  return r;
}

double ln_sinh(double z) {
  return z + std::log(-std::expm1(-2.0 * z)) - std::log(2.0);
}
double ln_cosh(double z) {
  return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
}

// Olver's uniform large-order expansion for I_nu(nu w), DLMF 10.41.  With
// t = 1/sqrt(1+w^2) the u_k(t) coefficients stay small for the w >= 2.5
// regime this path serves, so four terms reach ~1e-13.
double u_poly(int k, double t) {
  const double t2 = t * t;
  switch (k) {
    case 1: return t * (3.0 - 5.0 * t2) / 24.0;
    case 2: return t2 * (81.0 + t2 * (-462.0 + t2 * 385.0)) / 1152.0;
    case 3:
      return t * t2 *
             (30375.0 + t2 * (-369603.0 + t2 * (765765.0 - t2 * 425425.0))) /
             414720.0;
    case 4:
      return t2 * t2 *
             (4465125.0 +
              t2 * (-94121676.0 +
                    t2 * (349922430.0 + t2 * (-446185740.0 + t2 * 185910725.0)))) /
             39813120.0;
    default: return 0.0;
  }
}

double ln_bessel_i_uniform(double nu, double z) {
  const double w = z / nu;
  const double s = std::hypot(1.0, w);
  const double t = 1.0 / s;
  const double eta = s + std::log(w / (1.0 + s));
  double series = 1.0, p = 1.0;
  for (int k = 1; k <= 4; ++k) {
    p /= nu;
    series += u_poly(k, t) * p;
  }
  return nu * eta - 0.5 * std::log(2.0 * pi * nu) - 0.5 * std::log(s) +
         std::log(series);
}

}  // namespace

RiccatiTables riccati_tables(int l_max, double z) {
  check_domain(l_max, z);
  RiccatiTables t;
  const int n = l_max + 1;
  t.ln_si.resize(n);
  t.ln_sk.resize(n);
  t.ln_sip.resize(n);
  t.ln_skp.resize(n);

  t.ln_si[0] = ln_sinh(z);
  if (z <= kMillerCap || l_max == 0) {
    const auto r = i_ratios(l_max, z);
    for (int l = 0; l < l_max; ++l)
      t.ln_si[l + 1] = t.ln_si[l] + std::log(r[l]);
  } else {
    // Far above the physical size parameters; serve each order directly.
    const double lhalf = 0.5 * std::log(pi * z / 2.0);
    for (int l = 1; l <= l_max; ++l)
      t.ln_si[l] = ln_bessel_i_uniform(l + 0.5, z) + lhalf;
  }

  t.ln_sk[0] = std::log(pi / 2.0) - z;
  if (l_max >= 1) t.ln_sk[1] = t.ln_sk[0] + std::log1p(1.0 / z);
  for (int l = 1; l < l_max; ++l)
    t.ln_sk[l + 1] =
        log_add(t.ln_sk[l - 1], std::log((2.0 * l + 1.0) / z) + t.ln_sk[l]);

  // Si_l' = Si_{l-1} - (l/z) Si_l > 0;  Sk_l' = -(Sk_{l-1} + (l/z) Sk_l).
  t.ln_sip[0] = ln_cosh(z);
  t.ln_skp[0] = t.ln_sk[0];
  for (int l = 1; l <= l_max; ++l) {
    t.ln_sip[l] = log_sub(t.ln_si[l - 1], std::log(l / z) + t.ln_si[l]);
    t.ln_skp[l] = log_add(t.ln_sk[l - 1], std::log(l / z) + t.ln_sk[l]);
  }
  return t;
}

LogSigned ln_bessel_i(int l, double x) {
  check_domain(l, x);
  const double lhalf = 0.5 * std::log(pi * x / 2.0);
  if (x > kMillerCap && l >= 1)
    return LogSigned::from_ln(ln_bessel_i_uniform(l + 0.5, x));
  if (x > kMillerCap && l == 0)
    return LogSigned::from_ln(ln_sinh(x) - lhalf);
  const auto t = riccati_tables(l, x);
  return LogSigned::from_ln(t.ln_si[l] - lhalf);
}

LogSigned ln_bessel_k(int l, double x) {
  check_domain(l, x);
  // Exact finite representation:
  //   K_{l+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{j=0}^{l} (l+j)!/(j!(l-j)! (2x)^j)
  std::vector<double> terms(l + 1);
  for (int j = 0; j <= l; ++j) {
    terms[j] = ln_factorial(l + j) - ln_factorial(j) - ln_factorial(l - j) -
               j * std::log(2.0 * x);
  }
  const double lnsum = log_sum_exp(terms);
  return LogSigned::from_ln(0.5 * std::log(pi / (2.0 * x)) - x + lnsum);
}

}  // namespace casimir
