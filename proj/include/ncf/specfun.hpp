#pragma once

// Real-argument digamma, polygamma (orders 1 and 2) and Hurwitz zeta for
// integer order. All three use the same scheme: shift the argument upward with
// the recurrence until it reaches the asymptotic region, then sum the
// Bernoulli-number expansion through the B_14 term.

#include <array>
#include <cmath>
#include <concepts>
#include <string>

#include "ncf/errors.hpp"

namespace ncf::specfun {

struct SpecialConstants
{
    double euler_gamma;
    double zeta3;
    double zeta5;
};

inline constexpr SpecialConstants special_constants{
    .euler_gamma = 0.57721566490153286061,
    .zeta3 = 1.2020569031595942854,
    .zeta5 = 1.0369277551433699263,
};

namespace detail {

// B_2, B_4, ..., B_14
template<std::floating_point Real>
inline constexpr std::array<Real, 7> bernoulli_even{
    Real(1) / Real(6),    Real(-1) / Real(30),   Real(1) / Real(42),
    Real(-1) / Real(30),  Real(5) / Real(66),    Real(-691) / Real(2730),
    Real(7) / Real(6)};

// Arguments below this are shifted up before the asymptotic series is used.
inline constexpr double asymptotic_threshold = 10.0;

template<std::floating_point Real>
void require_positive(Real x, const char* fn)
{
    if (!std::isfinite(x) || !(x > Real(0)))
    {
        throw DomainError(std::string(fn) + ": argument must be finite and > 0, got "
                          + std::to_string(static_cast<double>(x)));
    }
}

} // namespace detail

/// Psi(x) = d/dx ln Gamma(x), for x > 0.
template<std::floating_point Real>
Real digamma(Real x)
{
    detail::require_positive(x, "digamma");

    Real shift = 0;
    while (x < Real(detail::asymptotic_threshold))
    {
        shift -= Real(1) / x;
        x += Real(1);
    }

    const Real inv2 = Real(1) / (x * x);
    Real pow = inv2;
    Real series = 0;
    for (std::size_t k = 0; k < detail::bernoulli_even<Real>.size(); ++k)
    {
        series += detail::bernoulli_even<Real>[k] / Real(2 * (k + 1)) * pow;
        pow *= inv2;
    }
    return shift + std::log(x) - Real(0.5) / x - series;
}

/// Psi^(n)(x) for n in {1, 2}, x > 0.
template<std::floating_point Real>
Real polygamma(int n, Real x)
{
    if (n != 1 && n != 2)
    {
        throw DomainError("polygamma: only orders 1 and 2 are supported, got "
                          + std::to_string(n));
    }
    detail::require_positive(x, "polygamma");

    // Psi^(n)(x) = (-1)^(n+1) n! sum_k (x+k)^-(n+1); accumulate the sum
    // without the sign and apply it at the end.
    const Real nfact = (n == 1) ? Real(1) : Real(2);
    Real head = 0;
    while (x < Real(detail::asymptotic_threshold))
    {
        head += nfact / std::pow(x, n + 1);
        x += Real(1);
    }

    // (n-1)!/x^n + n!/(2 x^(n+1)) + sum_k B_2k (2k+n-1)!/(2k)! / x^(2k+n)
    const Real inv = Real(1) / x;
    const Real inv2 = inv * inv;
    Real tail = (n == 1) ? inv + Real(0.5) * inv2 : inv2 + inv2 * inv;
    Real pow = (n == 1) ? inv2 * inv : inv2 * inv2;
    for (std::size_t k = 0; k < detail::bernoulli_even<Real>.size(); ++k)
    {
        const int twok = 2 * static_cast<int>(k + 1);
        // (2k+n-1)!/(2k)! is 1 for n = 1 and 2k+1 for n = 2
        const Real ratio = (n == 1) ? Real(1) : Real(twok + 1);
        tail += detail::bernoulli_even<Real>[k] * ratio * pow;
        pow *= inv2;
    }

    const Real magnitude = head + tail;
    return (n == 1) ? magnitude : -magnitude;
}

template<std::floating_point Real>
Real trigamma(Real x)
{
    return polygamma(1, x);
}

/// zeta(s, x) = sum_{n>=0} (n + x)^-s for integer s >= 2, x > 0.
template<std::floating_point Real>
Real hurwitz_zeta(int s, Real x)
{
    if (s < 2)
    {
        throw DomainError("hurwitz_zeta: order must be >= 2, got " + std::to_string(s));
    }
    detail::require_positive(x, "hurwitz_zeta");

    // Euler-Maclaurin remainder terms grow like (s)_{2j-1}/w^{2j-1}; start
    // the tail far enough out that they stay small for every s.
    const Real start = Real(detail::asymptotic_threshold) + Real(s);
    Real head = 0;
    while (x < start)
    {
        head += std::pow(x, -s);
        x += Real(1);
    }

    const Real ws = std::pow(x, -s);
    Real tail = x * ws / Real(s - 1) + Real(0.5) * ws;

    // B_2j/(2j)! * s(s+1)...(s+2j-2) * x^(-s-2j+1)
    const Real inv = Real(1) / x;
    Real rising = Real(s);      // s(s+1)...(s+2j-2)
    Real factorial = Real(2);   // (2j)!
    Real pow = ws * inv;
    for (std::size_t j = 0; j < detail::bernoulli_even<Real>.size(); ++j)
    {
        tail += detail::bernoulli_even<Real>[j] / factorial * rising * pow;
        const Real m = Real(2 * (j + 1));
        rising *= (Real(s) + m - Real(1)) * (Real(s) + m);
        factorial *= (m + Real(1)) * (m + Real(2));
        pow *= inv * inv;
    }
    return head + tail;
}

} // namespace ncf::specfun
