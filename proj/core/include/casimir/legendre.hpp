#pragma once

#include <vector>

#include "casimir/log_signed.hpp"

namespace casimir {

/// ln P_l^m(x) for x >= 1 in the Hobson convention
/// P_l^m(x) = (x^2-1)^{m/2} d^m/dx^m P_l(x), which is >= 0 on this domain
/// (no Condon-Shortley phase).  Upward recurrence in l; stable here because
/// P_l^m grows with l for x > 1.
LogSigned ln_assoc_legendre(int l, int m, double x);

/// Column ln P_l^m(x) for l = m..l_max (x > 1).
std::vector<double> legendre_column(int m, double x, int l_max);

/// Log-scaled angular coupling functions between plane waves and multipoles,
/// normalized per multipole:
///   pi~_{lm}  = Lambda_{lm} m P_l^m(x) / sqrt(x^2-1)
///   tau~_{lm} = Lambda_{lm} sqrt(x^2-1) dP_l^m/dx
///             = Lambda_{lm} [ P_l^{m+1}(x) + m x P_l^m(x)/sqrt(x^2-1) ]
///   Lambda_{lm}^2 = (2l+1)(l-m)! / ( l(l+1)(l+m)! )
/// The second tau form is a positive-term identity, free of the cancellation
/// the raw derivative suffers near x = 1.  Entries for l = max(1,m)..l_max;
/// ln(pi~) = -inf for m = 0.
struct PiTauColumns {
  int l_min = 1;
  std::vector<double> ln_pi;
  std::vector<double> ln_tau;
};

PiTauColumns pi_tau_columns(int m, double x, int l_max);

}  // namespace casimir
