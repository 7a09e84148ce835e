#pragma once

namespace casimir {

inline constexpr double pi = 3.14159265358979323846;

// CODATA 2018 exact SI values.
inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double electron_volt = 1.602176634e-19;       // J

/// Photon energy in eV -> angular frequency in rad/s.
inline constexpr double ev_to_rad_per_s(double ev) {
  return ev * electron_volt / hbar;
}

inline constexpr double rad_per_s_to_ev(double omega) {
  return omega * hbar / electron_volt;
}

/// Matsubara frequency xi_n = 2 pi n k_B T / hbar.
inline double matsubara_frequency(int n, double temperature) {
  return 2.0 * pi * n * boltzmann * temperature / hbar;
}

}  // namespace casimir
