#include "casimir/legendre.hpp"

#include <cmath>
#include <stdexcept>

namespace casimir {
namespace {

void check_domain(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l)
    throw std::domain_error("assoc Legendre: need 0 <= m <= l");
  if (!(x >= 1.0)) throw std::domain_error("assoc Legendre: need x >= 1");
}

constexpr double kRenorm = 1e250;
constexpr double kLnRenorm = 575.6462732485114;  // ln(1e250)

}  // namespace

std::vector<double> legendre_column(int m, double x, int l_max) {
  check_domain(l_max, m, x);
  std::vector<double> out(l_max - m + 1);
  // P_m^m = (2m-1)!! (x^2-1)^{m/2}
  const double x2m1 = (x - 1.0) * (x + 1.0);
  double off = ln_double_factorial_odd(m) + 0.5 * m * std::log(x2m1);
  double pa = 1.0;  // P_m^m / e^off
  out[0] = off;
  if (l_max == m) return out;
  double pb = (2.0 * m + 1.0) * x;  // P_{m+1}^m / e^off
  out[1] = off + std::log(pb);
  for (int l = m + 2; l <= l_max; ++l) {
    const double pc = ((2.0 * l - 1.0) * x * pb - (l + m - 1.0) * pa) / (l - m);
    pa = pb;
    pb = pc;
    if (pb > kRenorm) {
      pa /= kRenorm;
      pb /= kRenorm;
      off += kLnRenorm;
    }
    out[l - m] = off + std::log(pb);
  }
  return out;
}

LogSigned ln_assoc_legendre(int l, int m, double x) {
  check_domain(l, m, x);
  if (x == 1.0) {
    if (m == 0) return LogSigned::one();  // P_l(1) = 1
    return LogSigned::zero();
  }
  return LogSigned::from_ln(legendre_column(m, x, l)[l - m]);
}

PiTauColumns pi_tau_columns(int m, double x, int l_max) {
  if (!(x > 1.0)) throw std::domain_error("pi/tau couplings: need x > 1");
  if (m < 0 || l_max < std::max(1, m))
    throw std::domain_error("pi/tau couplings: bad (m, l_max)");
  PiTauColumns out;
  out.l_min = std::max(1, m);
  const int nl = l_max - out.l_min + 1;
  out.ln_pi.assign(nl, -std::numeric_limits<double>::infinity());
  out.ln_tau.assign(nl, 0.0);

  const auto pm1 = legendre_column(m + 1, x, std::max(l_max, m + 1));
  const double ln_s = 0.5 * std::log((x - 1.0) * (x + 1.0));
  std::vector<double> pm;
  if (m > 0) pm = legendre_column(m, x, l_max);

  for (int l = out.l_min; l <= l_max; ++l) {
    const double ln_lambda =
        0.5 * (std::log(2.0 * l + 1.0) - std::log(static_cast<double>(l)) -
               std::log(l + 1.0) + ln_factorial(l - m) - ln_factorial(l + m));
    const int i = l - out.l_min;
    const double ln_p_m1 =
        (l >= m + 1) ? pm1[l - (m + 1)] : -std::numeric_limits<double>::infinity();
    if (m == 0) {
      out.ln_tau[i] = ln_lambda + ln_p_m1;
    } else {
      const double ln_p = pm[l - m];
      out.ln_pi[i] = ln_lambda + std::log(static_cast<double>(m)) + ln_p - ln_s;
      out.ln_tau[i] =
          ln_lambda + log_add(ln_p_m1, std::log(m * x) + ln_p - ln_s);
    }
  }
  return out;
}

}  // namespace casimir
