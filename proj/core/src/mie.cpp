#include "casimir/mie.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/bessel.hpp"
#include "casimir/constants.hpp"

namespace casimir {
namespace {

const double kLnHalfPi = std::log(pi / 2.0);

void check_args(int l, double xi, double R) {
  if (l < 1) throw std::domain_error("mie: l must be >= 1");
  if (!(xi > 0.0)) throw std::domain_error("mie: xi must be > 0");
  if (!(R > 0.0)) throw std::domain_error("mie: R must be > 0");
}

MieColumns columns_pr(int l_max, double x) {
  const auto t = riccati_tables(l_max, x);
  MieColumns c;
  c.ln_a.resize(l_max + 1);
  c.ln_b.resize(l_max + 1);
  for (int l = 1; l <= l_max; ++l) {
    c.ln_a[l] = kLnHalfPi + t.ln_sip[l] - t.ln_skp[l];
    c.ln_b[l] = kLnHalfPi + t.ln_si[l] - t.ln_sk[l];
  }
  return c;
}

MieColumns columns_material(int l_max, double x, double n) {
  const auto tx = riccati_tables(l_max, x);
  const auto tn = riccati_tables(l_max, n * x);
  const double ln_n = std::log(n);
  MieColumns c;
  c.ln_a.resize(l_max + 1);
  c.ln_b.resize(l_max + 1);
  for (int l = 1; l <= l_max; ++l) {
    // a_l: num = n Si(nx) Si'(x) - Si(x) Si'(nx)            (> 0 for n > 1)
    //      den = n Si(nx) Sk'(x) - Sk(x) Si'(nx)            (< 0)
    const double num_a =
        log_sub(ln_n + tn.ln_si[l] + tx.ln_sip[l], tx.ln_si[l] + tn.ln_sip[l]);
    const double den_a =
        log_add(ln_n + tn.ln_si[l] + tx.ln_skp[l], tx.ln_sk[l] + tn.ln_sip[l]);
    c.ln_a[l] = kLnHalfPi + num_a - den_a;
    // b_l: num = Si(nx) Si'(x) - n Si(x) Si'(nx)            (< 0)
    //      den = Si(nx) Sk'(x) - n Sk(x) Si'(nx)            (< 0)
    const double num_b =
        log_sub(ln_n + tx.ln_si[l] + tn.ln_sip[l], tn.ln_si[l] + tx.ln_sip[l]);
    const double den_b =
        log_add(tn.ln_si[l] + tx.ln_skp[l], ln_n + tx.ln_sk[l] + tn.ln_sip[l]);
    c.ln_b[l] = kLnHalfPi + num_b - den_b;
  }
  return c;
}

}  // namespace

MieColumns mie_columns(int l_max, double xi, double R,
                       const MaterialModel& model) {
  check_args(std::max(l_max, 1), xi, R);
  const double x = xi * R / speed_of_light;
  if (model.is_perfect_reflector()) return columns_pr(l_max, x);
  const double eps = epsilon(model, xi);
  return columns_material(l_max, x, std::sqrt(eps));
}

std::pair<LogSigned, LogSigned> mie_coefficients(int l, double xi, double R,
                                                 const MaterialModel& model) {
  check_args(l, xi, R);
  const auto c = mie_columns(l, xi, R, model);
  return {LogSigned(c.ln_a[l], +1), LogSigned(c.ln_b[l], -1)};
}

double ln_mie_tm_zero(int l) {
  if (l < 1) throw std::domain_error("mie: l must be >= 1");
  return std::log(l + 1.0) - std::log(static_cast<double>(l)) -
         ln_double_factorial_odd(l) - ln_double_factorial_odd(l + 1);
}

double ln_mie_te_zero_plasma(int l, double y) {
  if (l < 1) throw std::domain_error("mie: l must be >= 1");
  if (!(y > 0.0)) throw std::domain_error("mie: omega_p R / c must be > 0");
  const auto t = riccati_tables(l + 1, y);
  return t.ln_si[l + 1] - t.ln_si[l - 1] - ln_double_factorial_odd(l) -
         ln_double_factorial_odd(l + 1);
}

double ln_mie_te_zero_pr(int l) {
  if (l < 1) throw std::domain_error("mie: l must be >= 1");
  return -ln_double_factorial_odd(l) - ln_double_factorial_odd(l + 1);
}

}  // namespace casimir
