#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ncf/trajectory.hpp"

using namespace ncf::trajectory;
using ncf::beamline::run_experiment;

namespace {
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
constexpr double graphite_L = 1.38e-16;
constexpr double gap = 1e-6;

// 200 gaps: a 1e-3 a offset grows by a few e-folds without reaching a plate
ExperimentConfig short_region(double L = graphite_L)
{
    auto cfg = ExperimentConfig::paper_defaults(L);
    cfg.region_length = 2e-4;
    return cfg;
}
} // namespace

TEST(Integrate, CenteredIonStaysCentered)
{
    const auto cfg = ExperimentConfig::paper_defaults(graphite_L);
    const auto out = integrate(cfg, {});
    EXPECT_FALSE(out.impacted);
    EXPECT_TRUE(out.passed_aperture);
    EXPECT_LE(std::abs(out.exit_state.z - 0.5 * gap), 1e-12 * gap);
    EXPECT_EQ(out.exit_state.vz, 0.0);
    EXPECT_LT(rel(out.exit_state.x, cfg.region_length), 1e-15);
}

TEST(Integrate, CenteredVelocityLossMatchesFlightTimeLaw)
{
    // at constant height vx = v0 exp(-G t) and x = v0 (1 - exp(-G t)) / G,
    // so the speed lost by x = l is exactly G l / v0
    for (double L : {2 * ncf::constants().eps0 / 2.30e7, graphite_L, 1e-14})
    {
        const auto cfg = ExperimentConfig::paper_defaults(L);
        const auto ref = run_experiment(cfg);
        const auto out = integrate(cfg, {});
        EXPECT_LT(rel(out.velocity_loss_fraction, ref.damping_rate * ref.flight_time), 1e-9) << L;
    }
}

TEST(Integrate, CenteredVelocityLossVersusClosedForm)
{
    // the closed form holds the speed fixed for the flight time; the two
    // differ by G dt / 2 relative
    for (double L : {2 * ncf::constants().eps0 / 2.30e7, graphite_L})
    {
        const auto cfg = ExperimentConfig::paper_defaults(L);
        const auto ref = run_experiment(cfg);
        const double x = ref.damping_rate * ref.flight_time;
        const double d = rel(integrate(cfg, {}).velocity_loss_fraction, ref.velocity_loss_fraction);
        EXPECT_NEAR(d, x / 2, 1e-3 * x);
    }
    const auto gold = ExperimentConfig::paper_defaults(2 * ncf::constants().eps0 / 2.30e7);
    EXPECT_LT(rel(integrate(gold, {}).velocity_loss_fraction, run_experiment(gold).velocity_loss_fraction),
              1e-6);
}

TEST(Integrate, OffsetGrowsMonotonically)
{
    IntegrationOptions opt;
    opt.record_path = true;
    const auto out = integrate(short_region(), {1e-3 * gap, 0.0}, opt);
    ASSERT_FALSE(out.impacted);
    ASSERT_GT(out.path.size(), 10u);
    double prev = 0;
    for (const auto& st : out.path)
    {
        const double excursion = std::abs(st.z - 0.5 * gap);
        EXPECT_GE(excursion, prev);
        prev = excursion;
    }
    EXPECT_GT(prev, 10 * 1e-3 * gap);
    EXPECT_GT(out.exit_state.vz, 0.0);
}

TEST(Integrate, ToleranceRefinementAgrees)
{
    IntegrationOptions loose, tight;
    loose.tolerance = 1e-10;
    tight.tolerance = 1e-12;
    const auto a = integrate(short_region(), {1e-3 * gap, 0.0}, loose);
    const auto b = integrate(short_region(), {1e-3 * gap, 0.0}, tight);
    const double ea = a.exit_state.z - 0.5 * gap;
    const double eb = b.exit_state.z - 0.5 * gap;
    EXPECT_LT(rel(ea, eb), 1e-8);
    EXPECT_LT(rel(a.exit_state.vz, b.exit_state.vz), 1e-8);
    EXPECT_LT(rel(a.exit_state.vx, b.exit_state.vx), 1e-12);
}

TEST(Integrate, MirrorSymmetricOffsets)
{
    for (double d : {1e-6, 1e-3, 0.05})
    {
        const auto up = integrate(short_region(), {d * gap, 0.0});
        const auto down = integrate(short_region(), {-d * gap, 0.0});
        EXPECT_EQ(up.impacted, down.impacted);
        EXPECT_EQ(up.passed_aperture, down.passed_aperture);
        const double eu = up.exit_state.z - 0.5 * gap;
        const double ed = down.exit_state.z - 0.5 * gap;
        EXPECT_LE(std::abs(eu + ed), 1e-10 * std::abs(eu));
        EXPECT_EQ(up.exit_state.vz, -down.exit_state.vz);
        EXPECT_EQ(up.exit_state.vx, down.exit_state.vx);
    }
}

TEST(Integrate, EnergyConservedWithoutFriction)
{
    IntegrationOptions opt;
    opt.tolerance = 1e-12;
    opt.record_path = true;
    const auto cfg = short_region(0.0);
    const auto out = integrate(cfg, {1e-3 * gap, 0.0}, opt);
    const double e0 = mechanical_energy(cfg, out.entry_state);
    for (const auto& st : out.path)
    {
        EXPECT_LT(rel(mechanical_energy(cfg, st), e0), 1e-9);
    }
    EXPECT_EQ(out.exit_state.vx * out.exit_state.vx + out.exit_state.vz * out.exit_state.vz > 0, true);
}

TEST(Integrate, FrictionNeverAddsEnergy)
{
    IntegrationOptions opt;
    opt.tolerance = 1e-12;
    opt.record_path = true;
    const auto cfg = short_region(1e-12);
    const auto out = integrate(cfg, {1e-3 * gap, 0.0}, opt);
    double prev = mechanical_energy(cfg, out.entry_state);
    for (const auto& st : out.path)
    {
        const double e = mechanical_energy(cfg, st);
        EXPECT_LE(e, prev * (1 + 1e-12));
        prev = e;
    }
    EXPECT_LT(prev, mechanical_energy(cfg, out.entry_state));
}

TEST(Integrate, ZeroLengthRegion)
{
    auto cfg = ExperimentConfig::paper_defaults(graphite_L);
    cfg.region_length = 0.0;
    const auto out = integrate(cfg, {0.2 * gap, 0.0});
    EXPECT_EQ(out.exit_state.z, out.entry_state.z);
    EXPECT_EQ(out.exit_state.vx, out.entry_state.vx);
    EXPECT_TRUE(out.passed_aperture);
    EXPECT_DOUBLE_EQ(out.detector_offset, 0.2 * gap);

    // a transverse speed that sweeps past the aperture edge over the drift
    const double v0 = out.entry_state.vx;
    const double vz_miss = 30e-6 / cfg.drift_distance * v0;
    EXPECT_FALSE(integrate(cfg, {0.0, vz_miss}).passed_aperture);
    EXPECT_TRUE(integrate(cfg, {0.0, vz_miss / 2}).passed_aperture);
    EXPECT_THROW(run_experiment(cfg), ncf::ValidationError);
}

TEST(Integrate, DefaultBeamlineIsUnstableForAnyOffset)
{
    const auto cfg = ExperimentConfig::paper_defaults(graphite_L);
    for (double d : {1e-15, 1e-9, 1e-3})
    {
        const auto out = integrate(cfg, {d * gap, 0.0});
        EXPECT_TRUE(out.impacted) << d;
        EXPECT_FALSE(out.passed_aperture);
        EXPECT_LT(out.exit_state.x, cfg.region_length);
        EXPECT_GT(out.exit_state.z, 0.5 * gap);
    }
}

TEST(Integrate, Errors)
{
    const auto cfg = short_region();
    EXPECT_THROW(integrate(cfg, {0.5 * gap, 0.0}), ncf::DomainError);
    EXPECT_THROW(integrate(cfg, {-0.7 * gap, 0.0}), ncf::DomainError);
    IntegrationOptions bad;
    bad.tolerance = 0;
    EXPECT_THROW(integrate(cfg, {}, bad), ncf::DomainError);
    IntegrationOptions tiny;
    tiny.tolerance = 1e-300;
    EXPECT_THROW(integrate(cfg, {1e-3 * gap, 0.0}, tiny), ncf::NumericalError);
    IntegrationOptions budget;
    budget.max_steps = 3;
    EXPECT_THROW(integrate(cfg, {1e-3 * gap, 0.0}, budget), ncf::NumericalError);
}

TEST(Integrate, StartingInContactIsAnImpact)
{
    const auto out = integrate(short_region(), {0.49999 * gap, 0.0});
    EXPECT_TRUE(out.impacted);
    EXPECT_EQ(out.accepted_steps, 0);
}

TEST(AcceptanceScan, MatchesSerialIntegrationInOrder)
{
    std::vector<double> offsets;
    for (int i = -6; i <= 6; ++i) offsets.push_back(i * 1e-3 * gap);
    const auto cfg = short_region();
    const auto scan = acceptance_scan(cfg, offsets);
    ASSERT_EQ(scan.size(), offsets.size());
    for (std::size_t i = 0; i < offsets.size(); ++i)
    {
        const auto one = integrate(cfg, {offsets[i], 0.0});
        EXPECT_EQ(scan[i].exit_state.z, one.exit_state.z);
        EXPECT_EQ(scan[i].passed_aperture, one.passed_aperture);
        EXPECT_EQ(scan[i].entry_state.z, 0.5 * gap + offsets[i]);
    }
    const std::vector<double> centered{0.0};
    EXPECT_TRUE(acceptance_scan(ExperimentConfig::paper_defaults(graphite_L), centered)[0].passed_aperture);
}

TEST(Threshold, BisectionOnShortRegion)
{
    const auto cfg = short_region();
    const auto b = find_threshold_offset(cfg, 1e-9 * gap, 0.4 * gap);
    ASSERT_TRUE(b.resolved);
    EXPECT_LE(b.smallest_failing / b.largest_passing, 1.01);
    EXPECT_TRUE(integrate(cfg, {b.largest_passing, 0.0}).passed_aperture);
    EXPECT_FALSE(integrate(cfg, {b.smallest_failing, 0.0}).passed_aperture);
}

TEST(Threshold, UnresolvedWhenEvenTheLowerEndFails)
{
    const auto b = find_threshold_offset(ExperimentConfig::paper_defaults(graphite_L), 1e-12 * gap, 0.1 * gap);
    EXPECT_FALSE(b.resolved);
    EXPECT_EQ(b.largest_passing, 0.0);
    EXPECT_EQ(b.smallest_failing, 1e-12 * gap);
    EXPECT_THROW(find_threshold_offset(short_region(), 0.0, 1e-7), ncf::DomainError);
}
