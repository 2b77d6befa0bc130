#pragma once

#include <numbers>

namespace vacfric::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J/K
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double mu0 = 1.25663706212e-6;        // H/m
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double avogadro = 6.02214076e23;      // 1/mol
inline constexpr double electron_gyromagnetic_ratio = 1.760859e11;  // rad/(s T)

// 1 Oe = 1000/(4 pi) A/m, 1 Torr = 133.322 Pa.
inline constexpr double amperes_per_meter_per_oersted = 1000.0 / (4.0 * pi);
inline constexpr double pascal_per_torr = 133.322;

}  // namespace vacfric::constants
