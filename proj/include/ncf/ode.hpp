#pragma once

// Embedded Runge-Kutta 5(4) pair of Dormand and Prince with the FSAL property.
// One call performs a single trial step and reports the scaled error; the
// caller owns step-size control and event handling.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace ncf::ode {

template<std::size_t N>
using Vector = std::array<double, N>;

template<std::size_t N>
struct TrialStep
{
    Vector<N> y;          // 5th-order solution
    Vector<N> slope_end;  // f(t + h, y), reused as the next step's first stage
    double error = 0;     // max-norm of the embedded error over the tolerance scale
    bool ok = false;      // false if the right-hand side refused a stage
};

/// Per-component error scale: tol * max(|y0_i|, |y1_i|, floor_i).
template<std::size_t N>
struct ErrorScale
{
    double tolerance;
    Vector<N> floor;
};

/// Rhs: bool(double t, const Vector<N>& y, Vector<N>& dydt); return false if
/// y lies outside the domain where the derivative is defined.
template<std::size_t N, class Rhs>
TrialStep<N> dormand_prince_step(const Rhs& rhs, double t, const Vector<N>& y0,
                                 const Vector<N>& k1, double h, const ErrorScale<N>& scale)
{
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b - b* (5th minus embedded 4th order weights)
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    TrialStep<N> out;
    Vector<N> k2, k3, k4, k5, k6, tmp;

    auto stage = [&](auto&& combine, double tc, Vector<N>& k) {
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y0[i] + h * combine(i);
        return rhs(tc, tmp, k);
    };

    if (!stage([&](std::size_t i) { return a21 * k1[i]; }, t + c2 * h, k2)) return out;
    if (!stage([&](std::size_t i) { return a31 * k1[i] + a32 * k2[i]; }, t + c3 * h, k3))
        return out;
    if (!stage([&](std::size_t i) { return a41 * k1[i] + a42 * k2[i] + a43 * k3[i]; },
               t + c4 * h, k4))
        return out;
    if (!stage([&](std::size_t i) {
            return a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i];
        }, t + c5 * h, k5))
        return out;
    if (!stage([&](std::size_t i) {
            return a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i];
        }, t + h, k6))
        return out;

    for (std::size_t i = 0; i < N; ++i)
    {
        out.y[i] = y0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    if (!rhs(t + h, out.y, out.slope_end)) return out;

    double err = 0;
    for (std::size_t i = 0; i < N; ++i)
    {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i]
                              + e7 * out.slope_end[i]);
        const double s = scale.tolerance
                         * std::max({std::abs(y0[i]), std::abs(out.y[i]), scale.floor[i]});
        err = std::max(err, std::abs(e) / s);
    }
    out.error = err;
    out.ok = std::isfinite(err);
    return out;
}

/// Standard controller for a 5th-order method: h * clamp(0.9 err^-1/5, 0.2, 5).
inline double next_step_factor(double error)
{
    if (error == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(error, -0.2), 0.2, 5.0);
}

} // namespace ncf::ode
