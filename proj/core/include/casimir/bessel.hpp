#pragma once

#include <vector>

#include "casimir/log_signed.hpp"

namespace casimir {

/// ln I_{l+1/2}(x) for a single half-integer order, x > 0, l >= 0.
LogSigned ln_bessel_i(int l, double x);

/// ln K_{l+1/2}(x), same domain.
LogSigned ln_bessel_k(int l, double x);

/// Riccati-type modified spherical Bessel tables:
///   Si_l(z) = sqrt(pi z / 2) I_{l+1/2}(z) = z i_l(z)
///   Sk_l(z) = sqrt(pi z / 2) K_{l+1/2}(z) = (2/pi)^{-1}... = z k_l(z)
/// together with the z-derivatives.  Sign conventions: Si, Sk, Si' > 0 and
/// Sk' < 0 for all z > 0, so magnitudes are stored and the fixed signs are
/// implicit.  Values for l = 0..l_max.
struct RiccatiTables {
  std::vector<double> ln_si;    // ln Si_l
  std::vector<double> ln_sk;    // ln Sk_l
  std::vector<double> ln_sip;   // ln Si_l'
  std::vector<double> ln_skp;   // ln |Sk_l'|
};

RiccatiTables riccati_tables(int l_max, double z);

}  // namespace casimir
