#pragma once

// Two-plate ("sniper") energy-loss experiment: an ion accelerated through U
// flies a distance l between two plates at the midplane, loses a fraction r of
// its speed to non-contact friction, and is analysed behind an aperture of
// diameter a_s at a drift distance D_drift. The aperture restricts the
// measurable speed change to xi v with xi = (a_s/D_drift)^2 / 2, and the
// figure of merit is f = r / xi.

#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "ncf/constants.hpp"
#include "ncf/errors.hpp"
#include "ncf/friction.hpp"
#include "ncf/matdb.hpp"
#include "ncf/mirror.hpp"

namespace ncf::beamline {

using friction::IonSpecies;
using mirror::PlatePair;

struct ExperimentConfig
{
    IonSpecies ion;
    double accel_voltage;      // V
    double region_length;      // m, l
    PlatePair geom;            // gap a and ion height Z
    double material_L;         // s/rad
    double aperture_diameter;  // m, a_s
    double drift_distance;     // m, D_drift

    /// He+ at 20 V, l = 10 cm, a = 1 um with the ion on the midplane,
    /// a_s = 50 um at D_drift = 1 m.
    static ExperimentConfig paper_defaults(double L)
    {
        return {friction::helium_ion(), 20.0, 0.10, PlatePair::centered(1e-6), L, 50e-6, 1.0};
    }
};

inline std::vector<std::string> violations(const ExperimentConfig& cfg,
                                           bool allow_zero_length = false)
{
    std::vector<std::string> out;
    auto positive = [&](double v, const char* what) {
        if (!std::isfinite(v) || !(v > 0)) out.push_back(std::string(what) + " must be > 0");
    };
    if (!std::isfinite(cfg.ion.mass) || !(cfg.ion.mass > 0)) out.push_back("ion mass must be > 0");
    if (cfg.ion.charge_number < 1) out.push_back("ion charge number must be >= 1");
    positive(cfg.accel_voltage, "accelerating voltage");
    if (allow_zero_length)
    {
        if (!std::isfinite(cfg.region_length) || cfg.region_length < 0)
            out.push_back("region length must be >= 0");
    }
    else
    {
        positive(cfg.region_length, "region length");
    }
    if (!std::isfinite(cfg.material_L) || cfg.material_L < 0) out.push_back("L must be >= 0");
    positive(cfg.aperture_diameter, "aperture diameter");
    positive(cfg.drift_distance, "drift distance");
    if (cfg.aperture_diameter >= cfg.drift_distance)
        out.push_back("aperture diameter must be smaller than the drift distance");
    return out;
}

inline void validate(const ExperimentConfig& cfg, bool allow_zero_length = false)
{
    if (auto v = violations(cfg, allow_zero_length); !v.empty())
    {
        throw ValidationError(std::move(v));
    }
}

struct ExperimentResult
{
    double entry_speed;             // m/s
    double flight_time;             // s
    double eta;                     // kg/s, two-plate friction coefficient
    double damping_rate;            // 1/s
    double velocity_loss_fraction;  // r
    double energy_loss_fraction;    // 1 - (1 - r)^2
    double resolution;              // xi
    double figure_of_merit;         // f = r / xi
    double de_broglie_reduced;      // m, hbar / (m v)
    double de_broglie;              // m, h / (m v)
    double retardation_parameter;   // v / c
};

/// Nonrelativistic v = sqrt(2 Z e U / m).
inline double entry_speed(const IonSpecies& ion, double voltage)
{
    ion.validate();
    if (!std::isfinite(voltage) || !(voltage > 0))
    {
        throw DomainError("entry_speed: accelerating voltage must be > 0");
    }
    return std::sqrt(2.0 * ion.charge() * voltage / ion.mass);
}

/// xi = (a_s / D_drift)^2 / 2
inline double resolution(double aperture_diameter, double drift_distance)
{
    const double ratio = aperture_diameter / drift_distance;
    return 0.5 * ratio * ratio;
}

/// The speed is held at its entry value for the flight time; the loss is
/// r = 1 - exp(-Gamma dt) with Gamma = eta_(2) / m.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    validate(cfg);
    const auto& k = constants();
    ExperimentResult r{};
    r.entry_speed = entry_speed(cfg.ion, cfg.accel_voltage);
    r.flight_time = cfg.region_length / r.entry_speed;
    r.eta = friction::eta_two_plate(cfg.ion, cfg.material_L, cfg.geom).eta;
    r.damping_rate = r.eta / cfg.ion.mass;
    r.velocity_loss_fraction = -std::expm1(-r.damping_rate * r.flight_time);
    r.energy_loss_fraction = r.velocity_loss_fraction * (2.0 - r.velocity_loss_fraction);
    r.resolution = resolution(cfg.aperture_diameter, cfg.drift_distance);
    r.figure_of_merit = r.velocity_loss_fraction / r.resolution;
    const double momentum = cfg.ion.mass * r.entry_speed;
    r.de_broglie_reduced = k.hbar / momentum;
    r.de_broglie = k.h / momentum;
    r.retardation_parameter = r.entry_speed / k.c;
    return r;
}

inline constexpr const char* damping_rate_note =
    "damping rate taken as Gamma = eta2/m (Newton's law m dv/dt = -eta2 v); "
    "a 2*eta2/m convention would double r and f";

struct MaterialRow
{
    std::string material;
    double L;
    ExperimentResult result;
    std::vector<std::string> warnings;
};

struct SkippedMaterial
{
    std::string material;
    std::string reason;
};

struct MaterialTable
{
    std::vector<MaterialRow> rows;
    std::vector<SkippedMaterial> skipped;
};

/// Relative tolerance beyond which a reference figure of merit is reported as divergent.
inline constexpr double reference_tolerance = 0.02;

inline std::string format_sci(double v, int digits = 3)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, v);
    return buf;
}

/// One experiment per material, in input order, with the template's L replaced
/// by the material's. Materials that cannot be resolved to an L are skipped and
/// reported.
inline MaterialTable material_table(std::span<const matdb::Material> materials,
                                    const ExperimentConfig& tmpl)
{
    MaterialTable table;
    for (const auto& m : materials)
    {
        double L = 0;
        try
        {
            L = matdb::resolve_L(m);
        }
        catch (const matdb::UnresolvableMaterial& e)
        {
            table.skipped.push_back({m.name, e.what()});
            continue;
        }
        ExperimentConfig cfg = tmpl;
        cfg.material_L = L;
        MaterialRow row{m.name, L, run_experiment(cfg), {}};
        if (m.reference_figure_of_merit)
        {
            const double ref = *m.reference_figure_of_merit;
            const double f = row.result.figure_of_merit;
            if (std::abs(f - ref) > reference_tolerance * std::abs(ref))
            {
                row.warnings.push_back(m.name + ": computed figure of merit f = r/xi = "
                                       + format_sci(f) + " differs from the reference value "
                                       + format_sci(ref) + " (ratio " + format_sci(ref / f)
                                       + "); the computed value is reported");
            }
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace ncf::beamline
