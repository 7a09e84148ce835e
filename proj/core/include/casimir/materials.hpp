#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

/// Dielectric response models on the imaginary frequency axis.
struct PerfectReflector {};

struct Plasma {
  double omega_p;  // plasma frequency, rad/s
};

struct Drude {
  double omega_p;  // rad/s
  double gamma;    // relaxation rate, rad/s (>= 0)
};

/// Samples of eps(i xi), strictly increasing in xi, all eps > 1.  Outside the
/// sampled range the model extends with the physical asymptotics: a Drude fit
/// to the two lowest nodes below, eps = 1 + A/xi^2 above.
struct Tabulated {
  std::vector<double> xi;       // rad/s
  std::vector<double> eps;      // dimensionless
  Drude low_freq_extension{0.0, 0.0};  // fitted on construction
  double high_freq_coeff = 0.0;        // A in eps = 1 + A/xi^2
};

class MaterialModel {
 public:
  using Variant = std::variant<PerfectReflector, Plasma, Drude, Tabulated>;

  MaterialModel(PerfectReflector m) : v_(m) {}
  MaterialModel(Plasma m);
  MaterialModel(Drude m);
  MaterialModel(Tabulated m);

  static MaterialModel perfect_reflector() { return MaterialModel(PerfectReflector{}); }
  static MaterialModel plasma(double omega_p) { return MaterialModel(Plasma{omega_p}); }
  static MaterialModel drude(double omega_p, double gamma) {
    return MaterialModel(Drude{omega_p, gamma});
  }

  const Variant& variant() const { return v_; }
  bool is_perfect_reflector() const {
    return std::holds_alternative<PerfectReflector>(v_);
  }

  /// Plasma frequency associated with the model's low-frequency behaviour
  /// (used by the plasma zero-frequency prescription); 0 if none.
  double low_freq_omega_p() const;

  std::string describe() const;

 private:
  Variant v_;
};

struct FresnelPair {
  double r_tm;  // in [0, 1] on the imaginary axis with eps >= 1
  double r_te;  // in [-1, 0]
};

/// eps(i xi) for xi > 0.  Not defined for the perfect reflector (the variant
/// itself signals the eps -> inf limit); throws std::logic_error there.
double epsilon(const MaterialModel& model, double xi);

/// Imaginary-frequency Fresnel amplitudes at transverse wavenumber k >= 0:
///   kappa   = sqrt(k^2 + xi^2/c^2),  kappa_m = sqrt(k^2 + eps xi^2/c^2)
///   r_TM = (eps kappa - kappa_m)/(eps kappa + kappa_m)
///   r_TE = (kappa - kappa_m)/(kappa + kappa_m)
/// Perfect reflector gives (1, -1) exactly.
FresnelPair fresnel(double k, double xi, const MaterialModel& model);

/// r_TE in the xi -> 0 limit of the plasma model (finite, < 0):
///   (k - sqrt(k^2 + wp^2/c^2)) / (k + sqrt(k^2 + wp^2/c^2))
double fresnel_te_zero_plasma(double k, double omega_p);

/// Parse a permittivity table: two whitespace-separated columns
/// (xi in rad/s, eps), '#' comments, strictly ascending xi, eps > 1,
/// at least 2 rows.  Errors carry the 1-based line number.
MaterialModel load_tabulated(std::istream& in);
MaterialModel load_tabulated_file(const std::string& path);

}  // namespace casimir
