#pragma once

// Command-line front end. `run` takes the argument vector (without the program
// name) and returns the process exit code:
//   0 success, 2 usage or validation error, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncf/beamline.hpp"
#include "ncf/dielectric.hpp"
#include "ncf/errors.hpp"
#include "ncf/friction.hpp"
#include "ncf/matdb.hpp"
#include "ncf/mirror.hpp"
#include "ncf/report.hpp"
#include "ncf/specfun.hpp"
#include "ncf/trajectory.hpp"

namespace ncf::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numerical = 3;

inline constexpr const char* materials_env = "NCF_MATERIALS_PATH";

/// Usage problem detected after parsing (unknown material, conflicting flags).
class UsageError : public Error
{
  public:
    using Error::Error;
};

namespace detail {

using report::Cell;
using report::Column;
using report::OutputRecord;
using report::Quantity;

struct BeamFlags
{
    double voltage = 20.0;
    double length = 0.10;
    double gap = 1e-6;
    std::optional<double> height;  // defaults to the midplane
    double aperture = 50e-6;
    double drift = 1.0;
    int charge = 1;
    double mass = constants().m_he;

    void add_to(CLI::App& cmd)
    {
        cmd.add_option("--voltage", voltage, "accelerating voltage U [V]")->capture_default_str();
        cmd.add_option("--length", length, "interaction region length l [m]")->capture_default_str();
        cmd.add_option("--gap", gap, "plate separation a [m]")->capture_default_str();
        cmd.add_option("--height", height, "ion height Z above the lower plate [m] (default a/2)");
        cmd.add_option("--aperture", aperture, "aperture diameter a_s [m]")->capture_default_str();
        cmd.add_option("--drift", drift, "drift distance to the aperture [m]")->capture_default_str();
        cmd.add_option("--charge", charge, "ion charge number Z")->capture_default_str();
        cmd.add_option("--mass", mass, "ion mass [kg]")->capture_default_str();
    }

    bool any_set(const CLI::App& cmd) const
    {
        for (const char* name : {"--voltage", "--length", "--gap", "--height", "--aperture",
                                 "--drift", "--charge", "--mass"})
        {
            if (cmd.count(name) > 0) return true;
        }
        return false;
    }

    beamline::ExperimentConfig config(double L) const
    {
        const double z = height.value_or(0.5 * gap);
        friction::IonSpecies ion{charge == 1 ? "He+" : "ion", mass, charge};
        return {ion, voltage, length, mirror::PlatePair(gap, z), L, aperture, drift};
    }

    void describe(OutputRecord& rec, const beamline::ExperimentConfig& cfg) const
    {
        rec.inputs.push_back({"accel_voltage", cfg.accel_voltage, "V"});
        rec.inputs.push_back({"region_length", cfg.region_length, "m"});
        rec.inputs.push_back({"gap", cfg.geom.gap(), "m"});
        rec.inputs.push_back({"height", cfg.geom.height(), "m"});
        rec.inputs.push_back({"aperture_diameter", cfg.aperture_diameter, "m"});
        rec.inputs.push_back({"drift_distance", cfg.drift_distance, "m"});
        rec.inputs.push_back({"charge_number", double(cfg.ion.charge_number), "1"});
        rec.inputs.push_back({"ion_mass", cfg.ion.mass, "kg"});
    }
};

inline std::vector<double> read_offsets_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open offsets file");
    std::vector<double> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double v;
        if (!(ss >> v))
        {
            std::string rest;
            if (std::istringstream(line) >> rest)
                throw ParseError(path + ":" + std::to_string(lineno) + ": not a number");
            continue;
        }
        out.push_back(v);
    }
    return out;
}

struct Context
{
    std::string format = "csv";
    std::optional<std::string> materials_path;
    bool paper_defaults = false;

    std::vector<matdb::Material> catalog() const
    {
        std::optional<std::string> path = materials_path;
        if (!path)
        {
            if (const char* env = std::getenv(materials_env); env && *env) path = env;
        }
        return matdb::catalog(path);
    }

    static const matdb::Material& lookup(const std::vector<matdb::Material>& cat,
                                         const std::string& name)
    {
        if (const auto* m = matdb::find(cat, name)) return *m;
        std::string known;
        for (const auto& m : cat) known += (known.empty() ? "" : ", ") + m.name;
        throw UsageError("unknown material '" + name + "' (known: " + known + ")");
    }
};

inline void emit(const Context& ctx, const OutputRecord& rec, std::ostream& out, std::ostream& err)
{
    for (const auto& w : rec.warnings) err << "warning: " << w << '\n';
    if (ctx.format == "json")
        report::write_json(out, rec);
    else
        report::write_csv(out, rec);
}

// lcoeff ---------------------------------------------------------------------

struct LcoeffFlags
{
    std::vector<std::string> materials;
    std::optional<std::string> model_path;
    double drude_gamma = dielectric::nominal_drude_relaxation;
};

inline OutputRecord cmd_lcoeff(const Context& ctx, const LcoeffFlags& f)
{
    OutputRecord rec;
    rec.command = "lcoeff";
    rec.columns = {{"material", ""},
                   {"kind", ""},
                   {"L_closed", "s/rad"},
                   {"L_numeric", "s/rad"},
                   {"relative_difference", "1"}};

    auto add_row = [&](const std::string& name, const char* kind, double closed,
                       const std::optional<dielectric::DielectricModel>& model) {
        if (!model)
        {
            rec.rows.push_back({name, std::string(kind), closed, std::monostate{}, std::monostate{}});
            rec.warnings.push_back(name + ": L is given directly; no dielectric model for the numeric limit");
            return;
        }
        const double numeric = dielectric::l_coefficient_numeric(*model);
        const double diff = (closed == 0.0 && numeric == 0.0)
                                ? 0.0
                                : std::abs(numeric - closed) / std::max(std::abs(closed), std::abs(numeric));
        rec.rows.push_back({name, std::string(kind), closed, numeric, diff});
    };

    if (f.model_path)
    {
        const auto model = dielectric::load_model(*f.model_path);
        rec.inputs.push_back({"model", *f.model_path, ""});
        add_row(model.name().empty() ? *f.model_path : model.name(), "insulator_model",
                dielectric::l_coefficient_closed(model), model);
        return rec;
    }

    rec.inputs.push_back({"drude_relaxation_rate", f.drude_gamma, "rad/s"});
    const auto cat = ctx.catalog();
    std::vector<const matdb::Material*> selected;
    if (f.materials.empty())
        for (const auto& m : cat) selected.push_back(&m);
    else
        for (const auto& name : f.materials) selected.push_back(&Context::lookup(cat, name));

    for (const auto* m : selected)
    {
        const double closed = matdb::resolve_L(*m);
        add_row(m->name, matdb::to_string(m->kind), closed, matdb::model_for_limit(*m, f.drude_gamma));
    }
    return rec;
}

// mirror ---------------------------------------------------------------------

struct MirrorFlags
{
    double gap = 1e-6;
    std::vector<double> z_over_a;
    int grid = 9;
};

inline constexpr const char* midplane_d_note =
    "midplane friction factor D(a/2) = 12 zeta(3)/a^3 = 14.4247/a^3; the image series and the "
    "closed form both require a^3 (not Z^3) in the denominator";

inline OutputRecord cmd_mirror(const MirrorFlags& f)
{
    OutputRecord rec;
    rec.command = "mirror";
    rec.inputs.push_back({"gap", f.gap, "m"});
    rec.columns = {{"z_over_a", "1"}, {"C_times_a", "1"},      {"D_times_a3", "1"},
                   {"dCdZ_times_a2", "1"}, {"C", "1/m"},      {"D", "1/m^3"}};

    std::vector<double> points = f.z_over_a;
    if (points.empty())
    {
        if (f.grid < 1) throw UsageError("--grid must be >= 1");
        for (int k = 1; k <= f.grid; ++k) points.push_back(double(k) / double(f.grid + 1));
    }
    for (double zr : points)
    {
        if (!(zr > 0.0 && zr < 1.0))
            throw DomainError("z/a = " + report::format_number(zr) + " outside (0, 1)");
        const mirror::PlatePair g(f.gap, zr * f.gap);
        const auto p = mirror::reduced_position(g);
        rec.rows.push_back({zr, mirror::reduced::c_factor(p), mirror::reduced::d_factor(p),
                            mirror::reduced::c_gradient(p), mirror::c_factor(g), mirror::d_factor(g)});
    }
    rec.warnings.push_back(midplane_d_note);
    return rec;
}

// eta ------------------------------------------------------------------------

struct EtaFlags
{
    std::optional<std::string> material;
    std::optional<double> l_value;
    double height = 0.5e-6;
    std::optional<double> gap;
    int charge = 1;
    double mass = constants().m_he;
};

inline OutputRecord cmd_eta(const Context& ctx, const EtaFlags& f)
{
    OutputRecord rec;
    rec.command = "eta";
    friction::IonSpecies ion{"ion", f.mass, f.charge};

    double L = 0;
    std::optional<double> sigma;
    if (f.l_value)
    {
        L = *f.l_value;
        rec.inputs.push_back({"L", L, "s/rad"});
    }
    else
    {
        const auto cat = ctx.catalog();
        const auto& m = Context::lookup(cat, f.material.value_or("graphite"));
        L = matdb::resolve_L(m);
        if (m.kind == matdb::MaterialKind::conductor) sigma = m.sigma_dc;
        rec.inputs.push_back({"material", m.name, ""});
    }
    rec.inputs.push_back({"height", f.height, "m"});
    if (f.gap) rec.inputs.push_back({"gap", *f.gap, "m"});
    rec.inputs.push_back({"charge_number", double(f.charge), "1"});

    rec.columns = {{"configuration", ""}, {"route", ""}, {"eta", "kg/s"}, {"L", "s/rad"},
                   {"geometry_factor", "1/m^3"}};
    auto add = [&](const friction::FrictionResult& r, const char* route) {
        rec.rows.push_back({std::string(friction::to_string(r.configuration)), std::string(route),
                            r.eta, r.l_used, r.geometry_factor});
    };
    add(friction::eta_single_wall(ion, L, f.height), "L");
    if (sigma) add(friction::eta_conductor(ion, *sigma, f.height), "sigma");
    if (f.gap) add(friction::eta_two_plate(ion, L, mirror::PlatePair(*f.gap, f.height)), "L");
    return rec;
}

// experiment -----------------------------------------------------------------

struct ExperimentFlags
{
    BeamFlags beam;
    std::vector<std::string> materials;
};

inline OutputRecord cmd_experiment(const Context& ctx, const ExperimentFlags& f,
                                   bool overrides_given)
{
    if (ctx.paper_defaults && overrides_given)
        throw UsageError("--paper-defaults cannot be combined with beam or geometry overrides");

    OutputRecord rec;
    rec.command = "experiment";
    const auto cat = ctx.catalog();

    std::vector<matdb::Material> selected;
    if (!f.materials.empty())
    {
        for (const auto& name : f.materials) selected.push_back(Context::lookup(cat, name));
    }
    else if (ctx.paper_defaults)
    {
        selected = matdb::builtin_materials();
    }
    else
    {
        selected = cat;
    }

    const auto tmpl = f.beam.config(0.0);
    f.beam.describe(rec, tmpl);
    rec.inputs.push_back({"paper_defaults", ctx.paper_defaults, ""});

    const auto table = beamline::material_table(selected, tmpl);
    const auto kin = beamline::run_experiment(tmpl);
    rec.outputs.push_back({"entry_speed", kin.entry_speed, "m/s"});
    rec.outputs.push_back({"flight_time", kin.flight_time, "s"});
    rec.outputs.push_back({"resolution_xi", kin.resolution, "1"});
    rec.outputs.push_back({"de_broglie_reduced", kin.de_broglie_reduced, "m"});
    rec.outputs.push_back({"de_broglie", kin.de_broglie, "m"});
    rec.outputs.push_back({"retardation_parameter", kin.retardation_parameter, "1"});
    rec.outputs.push_back({"D_factor", mirror::d_factor(tmpl.geom), "1/m^3"});

    rec.columns = {{"material", ""},   {"L", "s/rad"},           {"eta", "kg/s"},
                   {"Gamma", "1/s"},   {"flight_time", "s"},     {"r", "1"},
                   {"energy_loss_fraction", "1"}, {"xi", "1"},   {"f", "1"}};
    for (const auto& row : table.rows)
    {
        const auto& r = row.result;
        rec.rows.push_back({row.material, row.L, r.eta, r.damping_rate, r.flight_time,
                            r.velocity_loss_fraction, r.energy_loss_fraction, r.resolution,
                            r.figure_of_merit});
        rec.warnings.insert(rec.warnings.end(), row.warnings.begin(), row.warnings.end());
    }
    for (const auto& s : table.skipped)
        rec.warnings.push_back("skipped " + s.material + ": " + s.reason);
    rec.warnings.push_back(beamline::damping_rate_note);
    return rec;
}

// trajectory -----------------------------------------------------------------

struct TrajectoryFlags
{
    BeamFlags beam;
    std::string material = "graphite";
    std::optional<double> l_value;
    std::vector<double> offsets;
    std::optional<std::string> offsets_file;
    double vz = 0.0;
    double tolerance = 1e-10;
    double contact = 1e-3;
    bool bisect = false;
    std::optional<double> bisect_lo;  // m, default 1e-12 a
    std::optional<double> bisect_hi;  // m, default 0.4 a
};

inline OutputRecord cmd_trajectory(const Context& ctx, const TrajectoryFlags& f,
                                   bool overrides_given)
{
    if (ctx.paper_defaults && overrides_given)
        throw UsageError("--paper-defaults cannot be combined with beam or geometry overrides");

    OutputRecord rec;
    rec.command = "trajectory";

    double L = 0;
    if (f.l_value)
    {
        L = *f.l_value;
        rec.inputs.push_back({"L", L, "s/rad"});
    }
    else
    {
        const auto cat = ctx.catalog();
        const auto& m = Context::lookup(cat, f.material);
        L = matdb::resolve_L(m);
        rec.inputs.push_back({"material", m.name, ""});
    }
    const auto cfg = f.beam.config(L);
    beamline::validate(cfg, true);
    f.beam.describe(rec, cfg);
    rec.inputs.push_back({"entry_vz", f.vz, "m/s"});
    rec.inputs.push_back({"tolerance", f.tolerance, "1"});
    rec.inputs.push_back({"contact_distance", f.contact, "1"});

    std::vector<double> offsets = f.offsets;
    if (f.offsets_file)
    {
        auto more = read_offsets_file(*f.offsets_file);
        offsets.insert(offsets.end(), more.begin(), more.end());
    }
    if (offsets.empty() && !f.bisect) offsets.push_back(0.0);

    trajectory::IntegrationOptions opt;
    opt.tolerance = f.tolerance;
    opt.contact_distance = f.contact;

    std::vector<trajectory::EntryCondition> entries;
    for (double d : offsets) entries.push_back({d, f.vz});
    const auto outcomes = trajectory::acceptance_scan(cfg, entries, opt);

    rec.columns = {{"offset", "m"},          {"exit_z", "m"},     {"exit_vx", "m/s"},
                   {"impact_flag", ""},      {"passed_aperture", ""}, {"r", "1"}};
    for (std::size_t i = 0; i < outcomes.size(); ++i)
    {
        const auto& o = outcomes[i];
        rec.rows.push_back({offsets[i], o.exit_state.z, o.exit_state.vx, o.impacted,
                            o.passed_aperture, o.velocity_loss_fraction});
    }

    if (f.bisect)
    {
        const double lo = f.bisect_lo.value_or(1e-12 * cfg.geom.gap());
        const double hi = f.bisect_hi.value_or(0.4 * cfg.geom.gap());
        const auto b = trajectory::find_threshold_offset(cfg, lo, hi, 1.01, opt);
        rec.outputs.push_back({"threshold_largest_passing", b.largest_passing, "m"});
        rec.outputs.push_back({"threshold_smallest_failing", b.smallest_failing, "m"});
        rec.outputs.push_back({"threshold_resolved", b.resolved, ""});
        if (!b.resolved)
        {
            rec.warnings.push_back("threshold not bracketed inside [" + report::format_number(lo)
                                   + ", " + report::format_number(hi)
                                   + "] m; reported bracket is [largest_passing, smallest_failing]");
        }
    }
    return rec;
}

// materials ------------------------------------------------------------------

inline OutputRecord cmd_materials(const Context& ctx)
{
    OutputRecord rec;
    rec.command = "materials";
    rec.columns = {{"name", ""}, {"kind", ""}, {"sigma_dc", "1/(Ohm m)"}, {"L", "s/rad"},
                   {"notes", ""}};
    for (const auto& m : ctx.catalog())
    {
        Cell sigma = m.sigma_dc ? Cell{*m.sigma_dc} : Cell{};
        rec.rows.push_back({m.name, std::string(matdb::to_string(m.kind)), sigma,
                            matdb::resolve_L(m), m.notes});
    }
    return rec;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    using namespace detail;

    CLI::App app{"Non-contact friction of ions near conducting and dielectric plates", "ncf"};
    app.fallthrough();
    app.require_subcommand(1);

    Context ctx;
    app.add_option("--format", ctx.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--materials", ctx.materials_path,
                   std::string("materials JSON file (default: $") + materials_env + ")");
    app.add_flag("--paper-defaults", ctx.paper_defaults,
                 "He+ at 20 V, l = 10 cm, a = 1 um, Z = a/2, a_s = 50 um, D_drift = 1 m");

    LcoeffFlags lf;
    auto* lcoeff = app.add_subcommand("lcoeff", "low-frequency loss coefficient L, closed form and numeric limit");
    lcoeff->add_option("--material", lf.materials, "material name (repeatable; default: all)");
    lcoeff->add_option("--model", lf.model_path, "dielectric model JSON file");
    lcoeff->add_option("--drude-gamma", lf.drude_gamma,
                       "relaxation rate for Drude models built from sigma [rad/s]")
        ->capture_default_str();

    MirrorFlags mf;
    auto* mirror_cmd = app.add_subcommand("mirror", "image-charge factors C, D and dC/dZ between two plates");
    mirror_cmd->add_option("--gap", mf.gap, "plate separation a [m]")->capture_default_str();
    mirror_cmd->add_option("--z-over-a", mf.z_over_a, "reduced heights Z/a (repeatable)");
    mirror_cmd->add_option("--grid", mf.grid, "uniform grid k/(N+1), k = 1..N")->capture_default_str();

    EtaFlags ef;
    auto* eta = app.add_subcommand("eta", "friction coefficient for one wall and for two plates");
    eta->add_option("--material", ef.material, "material name (default graphite)");
    eta->add_option("--L", ef.l_value, "loss coefficient L [s/rad], instead of a material");
    eta->add_option("--height", ef.height, "distance Z to the (lower) plate [m]")->capture_default_str();
    eta->add_option("--gap", ef.gap, "plate separation a [m]; adds the two-plate row");
    eta->add_option("--charge", ef.charge, "ion charge number Z")->capture_default_str();
    eta->add_option("--mass", ef.mass, "ion mass [kg]")->capture_default_str();

    ExperimentFlags xf;
    auto* experiment = app.add_subcommand("experiment", "energy-loss experiment table per material");
    xf.beam.add_to(*experiment);
    experiment->add_option("--material", xf.materials, "material name (repeatable)");

    TrajectoryFlags tf;
    auto* traj = app.add_subcommand("trajectory", "integrate ion paths between the plates");
    tf.beam.add_to(*traj);
    traj->add_option("--material", tf.material, "material name")->capture_default_str();
    traj->add_option("--L", tf.l_value, "loss coefficient L [s/rad], instead of a material");
    traj->add_option("--offset", tf.offsets, "entry offset from the midplane [m] (repeatable)");
    traj->add_option("--offsets-file", tf.offsets_file, "file with one offset [m] per line");
    traj->add_option("--vz", tf.vz, "entry transverse speed [m/s]")->capture_default_str();
    traj->add_option("--tolerance", tf.tolerance, "relative local error per step")->capture_default_str();
    traj->add_option("--contact", tf.contact, "plate contact distance as a fraction of the gap")
        ->capture_default_str();
    traj->add_flag("--bisect", tf.bisect, "bisect for the largest offset that reaches the aperture");
    traj->add_option("--bisect-lo", tf.bisect_lo, "lower bisection offset [m] (default 1e-12 a)");
    traj->add_option("--bisect-hi", tf.bisect_hi, "upper bisection offset [m] (default 0.4 a)");

    auto* materials = app.add_subcommand("materials", "list the material catalog");

    std::vector<std::string> argv_store{"ncf"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try
    {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp&)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try
    {
        OutputRecord rec;
        if (*lcoeff)
            rec = cmd_lcoeff(ctx, lf);
        else if (*mirror_cmd)
            rec = cmd_mirror(mf);
        else if (*eta)
            rec = cmd_eta(ctx, ef);
        else if (*experiment)
            rec = cmd_experiment(ctx, xf, xf.beam.any_set(*experiment));
        else if (*traj)
            rec = cmd_trajectory(ctx, tf, tf.beam.any_set(*traj));
        else if (*materials)
            rec = cmd_materials(ctx);
        emit(ctx, rec, out, err);
        return exit_ok;
    }
    catch (const NumericalError& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (const Error& e)
    {
        // domain, pole, validation, parse, unresolvable material, usage
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace ncf::cli
