#pragma once

// Physical constants (CODATA 2018) and atomic masses used throughout.
// Tests pin these exact values; change them only together with the tests.
namespace gie::constants {

inline constexpr double G = 6.67430e-11;              // m^3 kg^-1 s^-2
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double bohr_radius = 5.29177210903e-11; // m

// Atomic masses in kg (most abundant isotopes: 166Er, 133Cs, 87Rb).
inline constexpr double mass_erbium = 2.757e-25;
inline constexpr double mass_cesium = 2.2069e-25;
inline constexpr double mass_rubidium = 1.44316e-25;

}  // namespace gie::constants
