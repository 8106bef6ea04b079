#pragma once

// Planar (x, z) motion of the ion between the plates: the image force pulls it
// toward the nearer plate and the two-plate friction brakes the motion along
// the plates,
//
//   m dvz/dt = (Ze)^2/(4 pi eps0) dC/dZ,     m dvx/dt = -eta_(2)(Z) vx.
//
// The midplane is an unstable equilibrium. Integration stops at x = l or when
// the ion comes within the contact distance of a plate; survivors drift
// straight to the aperture plane.
//
// Internally the equations are integrated in units of the gap a and the entry
// speed v0, with the height stored as the signed offset u = Z/a - 1/2 so that
// mirror-image entry conditions give mirror-image trajectories bit-for-bit, and
// the speed along the plates stored as the loss w = 1 - vx/v0 so that the
// small loss fraction gets relative error control.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "ncf/beamline.hpp"
#include "ncf/constants.hpp"
#include "ncf/errors.hpp"
#include "ncf/mirror.hpp"
#include "ncf/ode.hpp"

namespace ncf::trajectory {

using beamline::ExperimentConfig;

struct TrajectoryState
{
    double x;   // m, along the plates from the entry plane
    double z;   // m, above the lower plate
    double vx;  // m/s
    double vz;  // m/s
    double t;   // s
};

struct TrajectoryOutcome
{
    TrajectoryState entry_state;
    TrajectoryState exit_state;     // at x = l, or at the impact point
    bool impacted = false;          // came within the contact distance of a plate
    bool passed_aperture = false;
    double detector_offset = 0;     // m, from the axis at the aperture plane (survivors)
    double velocity_loss_fraction = 0;  // 1 - vx_exit / vx_entry
    long accepted_steps = 0;
    long rejected_steps = 0;
    std::vector<TrajectoryState> path;  // accepted states, when requested
};

struct IntegrationOptions
{
    double tolerance = 1e-10;         // relative local error per step
    double contact_distance = 1e-3;   // fraction of the gap counted as a plate impact
    bool record_path = false;
    long max_steps = 20'000'000;
};

struct EntryCondition
{
    double offset = 0;  // m, Z - a/2 at entry
    double vz = 0;      // m/s
};

namespace detail {

using Vec = ode::Vector<4>;  // x, u, w = 1 - vx, vz in units of a and v0

struct Scales
{
    double gap;
    double speed;        // v0
    double time;         // a / v0
    double image;        // (Ze)^2/(4 pi eps0) / (m a v0^2)
    double drag;         // (Ze)^2 L / (32 pi eps0) / (m a^3) * (a / v0)
};

inline Scales make_scales(const ExperimentConfig& cfg)
{
    const double a = cfg.geom.gap();
    const double v0 = beamline::entry_speed(cfg.ion, cfg.accel_voltage);
    const double m = cfg.ion.mass;
    const double q2 = cfg.ion.charge_squared();
    const double eps0 = constants().eps0;
    Scales s;
    s.gap = a;
    s.speed = v0;
    s.time = a / v0;
    s.image = q2 / (4.0 * std::numbers::pi * eps0) / (m * a * v0 * v0);
    s.drag = q2 * cfg.material_L / (32.0 * std::numbers::pi * eps0) / (m * a * a * a) * s.time;
    return s;
}

inline bool inside_guard(double u)
{
    return std::abs(u) <= 0.5 - mirror::edge_guard;
}

struct Rhs
{
    Scales s;

    bool operator()(double /*t*/, const Vec& y, Vec& dydt) const
    {
        const double u = y[1];
        if (!std::isfinite(u) || !inside_guard(u)) return false;
        const auto p = mirror::ReducedPosition::from_offset(u);
        const double vx = 1.0 - y[2];
        dydt[0] = vx;
        dydt[1] = y[3];
        dydt[2] = s.drag == 0.0 ? 0.0 : s.drag * mirror::reduced::d_factor(p) * vx;
        dydt[3] = s.image * mirror::reduced::c_gradient(p);
        return true;
    }
};

inline TrajectoryState to_physical(const Vec& y, double tau, const Scales& s)
{
    return {y[0] * s.gap, (0.5 + y[1]) * s.gap, (1.0 - y[2]) * s.speed, y[3] * s.speed, tau * s.time};
}

} // namespace detail

/// Kinetic plus image energy, 1/2 m (vx^2 + vz^2) - (Ze)^2 C(Z)/(4 pi eps0).
inline double mechanical_energy(const ExperimentConfig& cfg, const TrajectoryState& st)
{
    const mirror::PlatePair here(cfg.geom.gap(), st.z);
    return 0.5 * cfg.ion.mass * (st.vx * st.vx + st.vz * st.vz)
           + friction::image_potential(cfg.ion, here);
}

/// Integrates one ion from x = 0 at the given offset from the midplane.
/// Plate impact is an outcome; step-size underflow and step-count exhaustion throw.
inline TrajectoryOutcome integrate(const ExperimentConfig& cfg, const EntryCondition& entry,
                                   const IntegrationOptions& opt = {})
{
    beamline::validate(cfg, /*allow_zero_length=*/true);
    if (!(opt.tolerance > 0) || !std::isfinite(opt.tolerance))
        throw DomainError("integrate: tolerance must be > 0");
    if (!(opt.contact_distance > mirror::edge_guard) || !(opt.contact_distance < 0.5))
        throw DomainError("integrate: contact distance must lie in (1e-9, 0.5) gaps");

    const auto s = detail::make_scales(cfg);
    const double u0 = entry.offset / s.gap;
    if (!std::isfinite(u0) || !(std::abs(u0) < 0.5))
        throw DomainError("integrate: entry offset must satisfy |offset| < a/2");
    if (!std::isfinite(entry.vz)) throw DomainError("integrate: entry vz must be finite");

    const double x_end = cfg.region_length / s.gap;
    const detail::Rhs rhs{s};
    auto in_contact = [&](double u) { return 0.5 - std::abs(u) <= opt.contact_distance; };

    detail::Vec y{0.0, u0, 0.0, entry.vz / s.speed};
    double tau = 0;

    TrajectoryOutcome out;
    out.entry_state = detail::to_physical(y, tau, s);
    if (opt.record_path) out.path.push_back(out.entry_state);

    auto finish = [&](bool impacted) {
        out.impacted = impacted;
        out.exit_state = detail::to_physical(y, tau, s);
        out.velocity_loss_fraction = y[2];
        const double vx = 1.0 - y[2];
        if (!impacted && vx > 0)
        {
            const double drift = cfg.drift_distance / s.gap;
            out.detector_offset = (y[1] + y[3] / vx * drift) * s.gap;
            out.passed_aperture = std::abs(out.detector_offset) <= 0.5 * cfg.aperture_diameter;
        }
        return out;
    };

    if (in_contact(u0)) return finish(true);
    if (x_end == 0.0) return finish(false);

    // relative control on everything; x is of order the step count anyway
    const double tiny = std::numeric_limits<double>::min();
    const ode::ErrorScale<4> scale{opt.tolerance, {1.0, tiny, tiny, tiny}};
    detail::Vec slope;
    if (!rhs(tau, y, slope)) throw NumericalError("integrate: entry point outside the gap");

    // A first step of a thousandth of a gap keeps the first trial well resolved.
    double h = std::min(1e-3, x_end);
    const double h_min = 64.0 * std::numeric_limits<double>::epsilon();

    while (true)
    {
        if (out.accepted_steps + out.rejected_steps >= opt.max_steps)
            throw NumericalError("integrate: step budget exhausted");
        if (h < h_min * std::max(1.0, tau))
            throw NumericalError("integrate: step size underflow at x = "
                                 + std::to_string(y[0] * s.gap) + " m");

        auto trial = ode::dormand_prince_step(rhs, tau, y, slope, h, scale);
        if (!trial.ok || trial.error > 1.0)
        {
            ++out.rejected_steps;
            h *= trial.ok ? std::max(0.2, ode::next_step_factor(trial.error)) : 0.25;
            continue;
        }

        if (trial.y[0] >= x_end)
        {
            // Land exactly on the exit plane: Newton on the step length, with dx/dh = vx.
            double hl = h * (x_end - y[0]) / (trial.y[0] - y[0]);
            for (int it = 0; it < 60; ++it)
            {
                auto landing = ode::dormand_prince_step(rhs, tau, y, slope, hl, scale);
                if (!landing.ok) throw NumericalError("integrate: failed to locate the exit plane");
                const double miss = landing.y[0] - x_end;
                trial = landing;
                if (std::abs(miss) <= 4.0 * std::numeric_limits<double>::epsilon() * x_end) break;
                hl -= miss / (1.0 - landing.y[2]);
            }
            ++out.accepted_steps;
            y = trial.y;
            y[0] = x_end;
            tau += hl;
            if (opt.record_path) out.path.push_back(detail::to_physical(y, tau, s));
            return finish(in_contact(y[1]));
        }

        ++out.accepted_steps;
        y = trial.y;
        slope = trial.slope_end;
        tau += h;
        if (opt.record_path) out.path.push_back(detail::to_physical(y, tau, s));
        if (in_contact(y[1])) return finish(true);
        h *= ode::next_step_factor(trial.error);
    }
}

/// Integrates every entry condition; results are in input order. Trajectories
/// are independent and are spread over the available hardware threads.
inline std::vector<TrajectoryOutcome> acceptance_scan(const ExperimentConfig& cfg,
                                                      std::span<const EntryCondition> entries,
                                                      const IntegrationOptions& opt = {})
{
    std::vector<TrajectoryOutcome> out(entries.size());
    const std::size_t workers =
        std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || entries.size() < 2)
    {
        for (std::size_t i = 0; i < entries.size(); ++i) out[i] = integrate(cfg, entries[i], opt);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
    {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < entries.size(); i += workers)
                out[i] = integrate(cfg, entries[i], opt);
        }));
    }
    for (auto& j : jobs) j.get();
    return out;
}

inline std::vector<TrajectoryOutcome> acceptance_scan(const ExperimentConfig& cfg,
                                                      std::span<const double> offsets,
                                                      const IntegrationOptions& opt = {})
{
    std::vector<EntryCondition> entries;
    entries.reserve(offsets.size());
    for (double d : offsets) entries.push_back({d, 0.0});
    return acceptance_scan(cfg, entries, opt);
}

struct ThresholdBracket
{
    double largest_passing;   // m; offset known to reach the aperture
    double smallest_failing;  // m; offset known to miss it
    bool resolved;            // the bracket was narrowed to the requested ratio
    int evaluations;
};

/// Bisects (geometrically, in |offset|) for the entry offset beyond which the
/// ion no longer reaches the aperture, starting from the bracket [lo, hi] with
/// entry vz = 0. When even lo fails, the bracket is reported as [0, lo]
/// (the centered ion is checked separately) with resolved = false.
inline ThresholdBracket find_threshold_offset(const ExperimentConfig& cfg, double lo, double hi,
                                              double ratio_tolerance = 1.01,
                                              const IntegrationOptions& opt = {})
{
    if (!(lo > 0) || !(hi > lo))
        throw DomainError("find_threshold_offset: need 0 < lo < hi");
    if (!(ratio_tolerance > 1.0)) throw DomainError("find_threshold_offset: ratio tolerance must be > 1");

    int evaluations = 0;
    auto passes = [&](double d) {
        ++evaluations;
        return integrate(cfg, {d, 0.0}, opt).passed_aperture;
    };

    if (!passes(lo))
    {
        const bool centered = passes(0.0);
        return {centered ? 0.0 : std::numeric_limits<double>::quiet_NaN(), lo, false, evaluations};
    }
    if (passes(hi)) return {hi, std::numeric_limits<double>::infinity(), false, evaluations};

    double pass = lo, fail = hi;
    while (fail / pass > ratio_tolerance)
    {
        const double mid = std::sqrt(pass * fail);
        if (passes(mid))
            pass = mid;
        else
            fail = mid;
    }
    return {pass, fail, true, evaluations};
}

} // namespace ncf::trajectory
