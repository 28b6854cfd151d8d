#pragma once

// Physical constants (CODATA 2018, exact or recommended values). Pinned here
// so regression values are bit-stable across platforms.
namespace cavnoise::constants {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K (exact)
inline constexpr double speed_of_light = 299792458.0; // m/s (exact)

}  // namespace cavnoise::constants
