#pragma once

#include <numbers>

namespace ncf {

/// CODATA-2018 values in SI units. Quantities fixed exactly by the 2019 SI
/// redefinition are exact; hbar is derived from the exact h.
struct PhysicalConstants
{
    double e;     // C
    double eps0;  // F/m
    double hbar;  // J s
    double h;     // J s
    double kB;    // J/K
    double c;     // m/s
    double m_he;  // kg, mass of the helium ion used for the beamline defaults
};

inline constexpr PhysicalConstants codata2018{
    .e = 1.602176634e-19,
    .eps0 = 8.8541878128e-12,
    .hbar = 6.62607015e-34 / (2.0 * std::numbers::pi),
    .h = 6.62607015e-34,
    .kB = 1.380649e-23,
    .c = 299792458.0,
    .m_he = 6.646e-27,
};

constexpr const PhysicalConstants& constants() noexcept { return codata2018; }

} // namespace ncf
