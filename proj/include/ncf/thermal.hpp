#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "ncf/constants.hpp"
#include "ncf/errors.hpp"

namespace ncf::thermal {

/// Temperature with its inverse thermal energy beta = 1/(kB T).
/// T = 0 is a distinct state (beta infinite) handled by explicit limit branches.
class ThermalState
{
  public:
    explicit ThermalState(double kelvin) : temperature_(kelvin)
    {
        if (!std::isfinite(kelvin) || kelvin < 0.0)
        {
            throw DomainError("ThermalState: temperature must be finite and >= 0, got "
                              + std::to_string(kelvin));
        }
    }

    double temperature() const noexcept { return temperature_; }
    bool is_zero() const noexcept { return temperature_ == 0.0; }

    double beta() const noexcept
    {
        return is_zero() ? std::numeric_limits<double>::infinity()
                         : 1.0 / (constants().kB * temperature_);
    }

  private:
    double temperature_;
};

namespace detail {
inline void require_finite(double omega, const char* fn)
{
    if (!std::isfinite(omega))
    {
        throw DomainError(std::string(fn) + ": frequency must be finite");
    }
}
} // namespace detail

/// Bose occupation n(w) = 1/(exp(beta hbar w) - 1).
inline double occupation(const ThermalState& state, double omega)
{
    detail::require_finite(omega, "occupation");
    if (omega == 0.0)
    {
        throw PoleError("occupation: n(w) has a pole at w = 0");
    }
    if (state.is_zero())
    {
        // n(w) -> 0 for w > 0; n(-w) = -1 - n(w) -> -1 for w < 0
        return omega > 0.0 ? 0.0 : -1.0;
    }
    return 1.0 / std::expm1(state.beta() * constants().hbar * omega);
}

/// Kallen-Welton factor Theta(w, T) = hbar w (1/2 + n(w)) = (hbar w / 2) coth(hbar beta w / 2).
/// Even in w; tends to kB T as w -> 0 and to hbar |w| / 2 at T = 0.
inline double kallen_welton(const ThermalState& state, double omega)
{
    detail::require_finite(omega, "kallen_welton");
    const double hw = constants().hbar * omega;
    if (state.is_zero())
    {
        return 0.5 * std::abs(hw);
    }
    const double kT = constants().kB * state.temperature();
    const double x = hw / kT;
    if (std::abs(x) < 1e-6)
    {
        // Laurent expansion of (x/2) coth(x/2): 1 + x^2/12
        return kT * (1.0 + x * x / 12.0);
    }
    return 0.5 * hw / std::tanh(0.5 * x);
}

} // namespace ncf::thermal
