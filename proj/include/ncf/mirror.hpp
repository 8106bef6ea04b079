#pragma once

// Image-charge sums for an ion between two grounded parallel conducting plates
// (lower plate surface at z = 0, upper at z = a, ion at height Z).
//
//   C(Z) = -(1/4a) [Psi(Z/a) + Psi(1 - Z/a) + 2 gamma_E]            potential factor
//   D(Z) = -(1/2a^3) [Psi''(Z/a) + Psi''(1 - Z/a) + 4 zeta(3)]      friction factor
//
// Symmetric values: C(a/2) = ln 2 / a, D(a/2) = 12 zeta(3) / a^3.
// Near the lower plate: C ~ 1/(4Z) + zeta(3) Z^2/(2a^3),
//                       D ~ 1/Z^3 + 12 zeta(5) Z^2/a^5.

#include <cmath>
#include <string>

#include "ncf/errors.hpp"
#include "ncf/specfun.hpp"

namespace ncf::mirror {

/// Positions closer than this fraction of the gap to either plate are refused.
inline constexpr double edge_guard = 1e-9;

class PlatePair
{
  public:
    PlatePair(double gap, double height) : gap_(gap), height_(height)
    {
        if (!std::isfinite(gap) || !(gap > 0))
        {
            throw DomainError("PlatePair: gap must be finite and > 0");
        }
        if (!std::isfinite(height) || !(height > 0) || !(height < gap))
        {
            throw DomainError("PlatePair: height must satisfy 0 < Z < a (Z = "
                              + std::to_string(height) + ", a = " + std::to_string(gap) + ")");
        }
        if (height < edge_guard * gap || gap - height < edge_guard * gap)
        {
            throw DomainError("PlatePair: height within 1e-9 a of a plate");
        }
    }

    static PlatePair centered(double gap) { return PlatePair(gap, 0.5 * gap); }

    double gap() const noexcept { return gap_; }
    double height() const noexcept { return height_; }
    double reduced_height() const noexcept { return height_ / gap_; }

    bool operator==(const PlatePair&) const = default;

  private:
    double gap_;
    double height_;
};

// The reduced functions take the position as the pair (z, w) = (Z/a, 1 - Z/a).
// Passing both keeps full relative precision next to either plate, and lets
// callers that track the signed midplane offset u use (1/2 + u, 1/2 - u), which
// are exact mirror images so that C and D are bit-for-bit symmetric.
struct ReducedPosition
{
    double lower;  // Z/a
    double upper;  // 1 - Z/a

    static ReducedPosition from_offset(double u) noexcept { return {0.5 + u, 0.5 - u}; }
};

namespace reduced {

inline void check(ReducedPosition p)
{
    if (!std::isfinite(p.lower) || !std::isfinite(p.upper) || !(p.lower >= edge_guard)
        || !(p.upper >= edge_guard))
    {
        throw DomainError("mirror: position outside the guarded gap (Z/a = "
                          + std::to_string(p.lower) + ")");
    }
}

/// C a
inline double c_factor(ReducedPosition p)
{
    check(p);
    const double g = specfun::special_constants.euler_gamma;
    return -0.25 * (specfun::digamma(p.lower) + specfun::digamma(p.upper) + 2.0 * g);
}

/// D a^3
inline double d_factor(ReducedPosition p)
{
    check(p);
    const double z3 = specfun::special_constants.zeta3;
    return -0.5 * (specfun::polygamma(2, p.lower) + specfun::polygamma(2, p.upper) + 4.0 * z3);
}

/// D a^3 through the Hurwitz zeta: zeta(3, z) + zeta(3, 1 - z) - 2 zeta(3).
inline double d_factor_hurwitz(ReducedPosition p)
{
    check(p);
    const double z3 = specfun::special_constants.zeta3;
    return specfun::hurwitz_zeta(3, p.lower) + specfun::hurwitz_zeta(3, p.upper) - 2.0 * z3;
}

/// (dC/dZ) a^2
inline double c_gradient(ReducedPosition p)
{
    check(p);
    return -0.25 * (specfun::trigamma(p.lower) - specfun::trigamma(p.upper));
}

} // namespace reduced

inline ReducedPosition reduced_position(const PlatePair& g) noexcept
{
    return {g.height() / g.gap(), (g.gap() - g.height()) / g.gap()};
}

/// C(Z) in 1/m.
inline double c_factor(const PlatePair& g)
{
    return reduced::c_factor(reduced_position(g)) / g.gap();
}

/// D(Z) in 1/m^3.
inline double d_factor(const PlatePair& g)
{
    const double a = g.gap();
    return reduced::d_factor(reduced_position(g)) / (a * a * a);
}

inline double d_factor_hurwitz(const PlatePair& g)
{
    const double a = g.gap();
    return reduced::d_factor_hurwitz(reduced_position(g)) / (a * a * a);
}

/// dC/dZ in 1/m^2. Negative below the midplane: the nearer plate attracts.
inline double c_gradient(const PlatePair& g)
{
    const double a = g.gap();
    return reduced::c_gradient(reduced_position(g)) / (a * a);
}

} // namespace ncf::mirror
