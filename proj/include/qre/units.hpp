#pragma once

#include <numbers>

// Atomic units throughout.
namespace qre::units {

inline constexpr double hbar = 1.0;
inline constexpr double electron_mass = 1.0;
inline constexpr double bohr_magneton = 0.5;
inline constexpr double proton_mass = 1837.0;  // hydrogen-like probe mass
inline constexpr double pi = std::numbers::pi;

}  // namespace qre::units
