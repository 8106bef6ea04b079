#pragma once

// Non-contact friction of a moving ion near conducting or dielectric plates.
//
//   single wall:  eta     = (Ze)^2 L / (32 pi eps0 Z^3)
//   two plates:   eta_(2) = (Ze)^2 L D(Z) / (32 pi eps0)
//   conductor:    eta     = (Ze)^2 / (16 pi sigma Z^3)      (L = 2 eps0 / sigma)
//
// None of these depends on the ion mass. Only the charge magnitude enters, so
// the sign of the charge is not stored.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ncf/constants.hpp"
#include "ncf/errors.hpp"
#include "ncf/mirror.hpp"

namespace ncf::friction {

struct IonSpecies
{
    std::string name;
    double mass;        // kg
    int charge_number;  // Z, magnitude

    /// |q| = Z e
    double charge() const noexcept { return charge_number * constants().e; }

    /// (Z e)^2, with the integer factor applied last so that Z scaling is exact.
    double charge_squared() const noexcept
    {
        const double e = constants().e;
        return static_cast<double>(charge_number * charge_number) * (e * e);
    }

    void validate() const
    {
        if (!std::isfinite(mass) || !(mass > 0))
        {
            throw DomainError("IonSpecies: mass must be finite and > 0");
        }
        if (charge_number < 1)
        {
            throw DomainError("IonSpecies: charge number must be a positive integer");
        }
    }

    bool operator==(const IonSpecies&) const = default;
};

inline IonSpecies helium_ion() { return {"He+", constants().m_he, 1}; }

enum class Configuration
{
    single_wall,
    two_plate
};

inline const char* to_string(Configuration c)
{
    return c == Configuration::single_wall ? "single_wall" : "two_plate";
}

struct FrictionResult
{
    double eta;              // kg/s
    Configuration configuration;
    double l_used;           // s/rad
    double geometry_factor;  // 1/m^3: 1/Z^3 or D(Z)
};

namespace detail {
inline void require_l(double L)
{
    if (!std::isfinite(L) || L < 0)
    {
        throw DomainError("friction: L must be finite and >= 0");
    }
}

inline double prefactor(const IonSpecies& ion)
{
    return ion.charge_squared() / (32.0 * std::numbers::pi * constants().eps0);
}
} // namespace detail

inline FrictionResult eta_single_wall(const IonSpecies& ion, double L, double distance)
{
    ion.validate();
    detail::require_l(L);
    if (!std::isfinite(distance) || !(distance > 0))
    {
        throw DomainError("eta_single_wall: distance must be finite and > 0");
    }
    const double geometry = 1.0 / (distance * distance * distance);
    return {detail::prefactor(ion) * L * geometry, Configuration::single_wall, L, geometry};
}

inline FrictionResult eta_two_plate(const IonSpecies& ion, double L, const mirror::PlatePair& geom)
{
    ion.validate();
    detail::require_l(L);
    const double geometry = mirror::d_factor(geom);
    return {detail::prefactor(ion) * L * geometry, Configuration::two_plate, L, geometry};
}

inline FrictionResult eta_conductor(const IonSpecies& ion, double sigma, double distance)
{
    ion.validate();
    if (!(sigma > 0) || std::isnan(sigma))
    {
        throw DomainError("eta_conductor: sigma must be > 0");
    }
    if (!std::isfinite(distance) || !(distance > 0))
    {
        throw DomainError("eta_conductor: distance must be finite and > 0");
    }
    const double geometry = 1.0 / (distance * distance * distance);
    const double L = 2.0 * constants().eps0 / sigma;
    const double eta = ion.charge_squared() / (16.0 * std::numbers::pi * sigma) * geometry;
    return {eta, Configuration::single_wall, L, geometry};
}

/// Electrostatic energy of the ion with all its images: -(Ze)^2 C(Z) / (4 pi eps0).
inline double image_potential(const IonSpecies& ion, const mirror::PlatePair& geom)
{
    ion.validate();
    return -ion.charge_squared() / (4.0 * std::numbers::pi * constants().eps0)
           * mirror::c_factor(geom);
}

/// z component of the image force, -dV/dZ = (Ze)^2/(4 pi eps0) dC/dZ.
inline double image_force(const IonSpecies& ion, const mirror::PlatePair& geom)
{
    ion.validate();
    return ion.charge_squared() / (4.0 * std::numbers::pi * constants().eps0)
           * mirror::c_gradient(geom);
}

// Coincident-point kernel. For a charge at r and a field point r' above a
// plane with normal n, the image-displacement kernel is
//   K(r, r') = 1 / |r' - r + 2 n (r . n)|
// and its mixed derivative d/dx d/dx' K at r' = r equals 1/(8 Z^3).

namespace detail {
using Vec3 = std::array<double, 3>;

inline double image_kernel(const Vec3& r, const Vec3& rp)
{
    // n = z-hat
    const double dx = rp[0] - r[0];
    const double dy = rp[1] - r[1];
    const double dz = rp[2] - r[2] + 2.0 * r[2];
    return 1.0 / std::sqrt(dx * dx + dy * dy + dz * dz);
}
} // namespace detail

inline constexpr double kernel_default_step = 5e-4;  // h / Z

/// Central-difference estimate of d/dx d/dx' K at coincidence above the plane,
/// in 1/m^3, with step h = step_fraction * distance.
inline double kernel_mixed_derivative(double distance, double step_fraction = kernel_default_step)
{
    if (!std::isfinite(distance) || !(distance > 0))
    {
        throw DomainError("kernel check: distance must be finite and > 0");
    }
    if (!std::isfinite(step_fraction) || !(step_fraction > 0) || !(step_fraction < 0.5))
    {
        throw DomainError("kernel check: step fraction must be in (0, 0.5)");
    }
    const double h = step_fraction * distance;
    auto k = [distance](double x, double xp) {
        return detail::image_kernel({x, 0.0, distance}, {xp, 0.0, distance});
    };
    const double sum = k(h, h) - k(h, -h) - k(-h, h) + k(-h, -h);
    return sum / (4.0 * h * h);
}

/// Ratio of the finite-difference mixed derivative to 1/(8 Z^3).
inline double kernel_limit_check(double distance, double step_fraction = kernel_default_step)
{
    const double ratio = kernel_mixed_derivative(distance, step_fraction) * 8.0 * distance
                         * distance * distance;
    if (!(std::abs(ratio - 1.0) <= 1e-4))
    {
        throw NumericalError("kernel_limit_check: ratio " + std::to_string(ratio)
                             + " outside 1 +/- 1e-4; reduce the step");
    }
    return ratio;
}

} // namespace ncf::friction
