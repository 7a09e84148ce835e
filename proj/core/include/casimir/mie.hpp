#pragma once

#include <utility>
#include <vector>

#include "casimir/log_signed.hpp"
#include "casimir/materials.hpp"

namespace casimir {

/// Mie scattering coefficients on the imaginary frequency axis, size
/// parameter x = xi R / c, refractive index n = sqrt(eps(i xi)).
///
/// Expressed through the Riccati functions Si_l, Sk_l (modified spherical
/// Bessel, see bessel.hpp); every building block has a fixed sign for
/// eps >= 1, so magnitudes are composed in log space without cancellation
/// beyond a single stable log-difference in each numerator.
///
/// Sign convention: a_l carries sign +1 and b_l sign -1, matching the static
/// polarizabilities of the sphere (alpha_E > 0, alpha_M < 0).  Analytic
/// continuation phases of the form (-1)^l are basis gauge and are dropped;
/// the round-trip assembly consumes magnitudes and is validated against the
/// dipole and proximity limits.
std::pair<LogSigned, LogSigned> mie_coefficients(int l, double xi, double R,
                                                 const MaterialModel& model);

/// ln|a_l|, ln|b_l| for l = 1..l_max at fixed xi (index by l; [0] unused).
struct MieColumns {
  std::vector<double> ln_a;
  std::vector<double> ln_b;
};
MieColumns mie_columns(int l_max, double xi, double R, const MaterialModel& model);

/// xi -> 0 limits with the power law stripped: |a_l| -> A_l x^{2l+1} and
/// |b_l| -> B_l x^{2l+1} as x -> 0.
///
/// TM / electric, eps -> inf (shared by every metallic prescription):
///   A_l = (l+1) / ( l (2l-1)!! (2l+1)!! )
double ln_mie_tm_zero(int l);

/// TE / magnetic, plasma model with y = omega_p R / c:
///   B_l(y) = Si_{l+1}(y) / ( (2l-1)!! (2l+1)!! Si_{l-1}(y) )
double ln_mie_te_zero_plasma(int l, double y);

/// TE / magnetic, perfect reflector (the y -> inf limit of the above):
///   B_l = 1 / ( (2l-1)!! (2l+1)!! )
double ln_mie_te_zero_pr(int l);

}  // namespace casimir
