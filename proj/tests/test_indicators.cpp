#include <gtest/gtest.h>

#include <cmath>

#include "srlab/errors.hpp"
#include "srlab/indicators.hpp"

using namespace srlab;
using namespace srlab::indicators;
using measure::DensityGrid;
using measure::GridSpec;
using measure::PeriodicMeasure;

namespace {

const rds::DuffingDrift kFast{1.0, 1.0, 0.12, 0.1};

PeriodicMeasure family(const std::vector<DensityGrid>& ds) {
    PeriodicMeasure pm;
    pm.period = 1.0;
    for (std::size_t k = 0; k < ds.size(); ++k) {
        pm.phase_times.push_back(static_cast<double>(k) / ds.size());
        pm.densities.push_back(ds[k]);
    }
    return pm;
}

// Mass `left` split over the cells [-2,-1) and `1 - left` over [1,2).
DensityGrid two_point(double left) { return {GridSpec{-2.0, 2.0, 4}, {left, 0.0, 0.0, 1.0 - left}}; }

}  // namespace

TEST(MeanTrajectory, SymmetricDensitiesHaveZeroMean) {
    const auto pm = family({two_point(0.5), two_point(0.5), two_point(0.5)});
    for (const auto& m : mean_trajectory(pm)) EXPECT_NEAR(m.mean, 0.0, 1e-15);
    EXPECT_NEAR(x_bar_amplitude(pm), 0.0, 1e-15);
}

TEST(MeanTrajectory, PointMassAtOne) {
    const GridSpec h{0.5, 1.5, 1};  // one cell centred at 1
    const auto pm = family({DensityGrid(h, {1.0}), DensityGrid(h, {1.0})});
    for (const auto& m : mean_trajectory(pm)) EXPECT_DOUBLE_EQ(m.mean, 1.0);
}

TEST(XBar, MaxAbsoluteMean) {
    // means 0.3 and -0.5 on cell centres -1.5, -0.5, 0.5, 1.5
    const GridSpec g{-2.0, 2.0, 4};
    const DensityGrid a(g, {0.0, 0.2, 0.8, 0.0});   // mean 0.3
    const DensityGrid b(g, {0.0, 1.0, 0.0, 0.0});   // mean -0.5
    EXPECT_DOUBLE_EQ(x_bar_amplitude(family({a, b})), 0.5);
    EXPECT_THROW(x_bar_amplitude(family({a})), ConfigError);
}

TEST(Transport, ConstantFamilyGivesZero) {
    const auto tp = transport_probabilities(family({two_point(0.3), two_point(0.3)}));
    EXPECT_EQ(tp.p_minus, 0.0);
    EXPECT_EQ(tp.p_plus, 0.0);
}

TEST(Transport, TwoPhaseToy) {
    const auto tp = transport_probabilities({0.8, 0.4}, {0.2, 0.6});
    EXPECT_DOUBLE_EQ(tp.p_minus, 0.5);
    EXPECT_DOUBLE_EQ(tp.p_plus, 2.0 / 3.0);
    const auto from_measure = transport_probabilities(family({two_point(0.8), two_point(0.4)}));
    EXPECT_DOUBLE_EQ(from_measure.p_minus, 0.5);
}

TEST(Transport, InvariantUnderPhaseRelabelling) {
    const auto a = transport_probabilities(family({two_point(0.1), two_point(0.7), two_point(0.4)}));
    const auto b = transport_probabilities(family({two_point(0.4), two_point(0.1), two_point(0.7)}));
    EXPECT_EQ(a.p_minus, b.p_minus);
    EXPECT_EQ(a.p_plus, b.p_plus);
}

TEST(Transport, DegenerateHalfLine) {
    EXPECT_THROW(transport_probabilities(family({two_point(0.0), two_point(0.0)})), DegenerateMeasureError);
    EXPECT_THROW(transport_probabilities({}, {}), ConfigError);
}

TEST(Indicator, Assembly) {
    const auto pm = family({two_point(1.0), two_point(0.0)});
    const auto r = resonance_indicator(pm);
    EXPECT_EQ(r.p_minus, 1.0);
    EXPECT_EQ(r.p_plus, 1.0);
    EXPECT_EQ(r.p, 1.0);
    EXPECT_DOUBLE_EQ(r.x_bar, 1.5);
    const auto half = resonance_indicator(family({two_point(0.0), two_point(0.5)}));
    EXPECT_DOUBLE_EQ(half.p_minus, 1.0);
    EXPECT_DOUBLE_EQ(half.p_plus, 0.5);
    EXPECT_DOUBLE_EQ(half.p, 0.5);
    const auto none = resonance_indicator(family({two_point(0.5), two_point(0.5)}));
    EXPECT_EQ(none.p, 0.0);
}

TEST(Indicator, DuffingHalvesAgreeAndStayInRange) {
    const rds::SdeSystem sys{rds::Drift::duffing(kFast), 0.5};
    const auto pm = measure::fp_periodic_measure(sys, measure::FpOptions{});
    const auto r = resonance_indicator(pm);
    EXPECT_GE(r.p_minus, 0.0);
    EXPECT_LE(r.p_minus, 1.0);
    EXPECT_NEAR(r.p_minus, r.p_plus, 0.05);
    EXPECT_GE(r.x_bar, 0.0);

    // mean oscillates with the period and changes sign twice
    const auto means = mean_trajectory(pm);
    int changes = 0;
    for (std::size_t k = 0; k < means.size(); ++k) {
        changes += (means[k].mean > 0) != (means[(k + 1) % means.size()].mean > 0);
    }
    EXPECT_EQ(changes, 2);
}

TEST(Indicator, PhaseRefinementStable) {
    const rds::SdeSystem sys{rds::Drift::duffing(kFast), 0.5};
    measure::FpOptions o;
    const double x16 = x_bar_amplitude(measure::fp_periodic_measure(sys, o));
    o.phases = 32;
    const double x32 = x_bar_amplitude(measure::fp_periodic_measure(sys, o));
    EXPECT_LT(std::abs(x32 - x16) / x16, 0.05);
}

TEST(Sweep, SingleSigmaEqualsDirectCall) {
    SweepConfig c;
    c.method = measure::Method::Pde;
    const auto rows = sigma_sweep(rds::Drift::duffing(kFast), {0.4}, c);
    ASSERT_EQ(rows.size(), 1u);
    const auto direct = resonance_indicator(
        measure::fp_periodic_measure({rds::Drift::duffing(kFast), 0.4}, c.fp));
    EXPECT_EQ(rows[0].p, direct.p);
    EXPECT_EQ(rows[0].x_bar, direct.x_bar);
    EXPECT_TRUE(rows[0].ok);
}

TEST(Sweep, FailuresStayInRow) {
    SweepConfig c;
    c.fp.max_periods = 1;
    const auto rows = sigma_sweep(rds::Drift::duffing(kFast), {0.3, 0.4}, c);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_FALSE(r.ok);
        EXPECT_FALSE(r.error.empty());
    }
    EXPECT_EQ(rows[1].sigma, 0.4);
    EXPECT_THROW(sigma_sweep(rds::Drift::duffing(kFast), {0.4, 0.3}, c), ConfigError);
    EXPECT_THROW(sigma_sweep(rds::Drift::duffing(kFast), {}, c), ConfigError);
}

TEST(Sweep, McUsesCommonRandomNumbers) {
    SweepConfig c;
    c.method = measure::Method::Mc;
    c.mc.n_paths = 200;
    c.mc.spinup_periods = 1;
    const auto a = sigma_sweep(rds::Drift::duffing(kFast), {0.3, 0.5}, c);
    const auto b = sigma_sweep(rds::Drift::duffing(kFast), {0.5}, c);
    EXPECT_EQ(a[1].p, b[0].p);
    EXPECT_EQ(a[1].x_bar, b[0].x_bar);
    EXPECT_EQ(a[1].n_paths_or_tol, 200.0);
}

TEST(Shape, ArgmaxAndUnimodal) {
    EXPECT_EQ(argmax({0.1, 0.5, 0.5, 0.2}), 1u);
    EXPECT_TRUE(unimodal({0.1, 0.3, 0.9, 0.5, 0.2}));
    EXPECT_TRUE(unimodal({0.1, 0.3, 0.25, 0.9, 0.5, 0.2}, 1));
    EXPECT_FALSE(unimodal({0.1, 0.3, 0.25, 0.9, 0.5, 0.2}, 0));
    EXPECT_FALSE(unimodal({0.9, 0.1, 0.8, 0.1, 0.7, 0.1}, 1));
    EXPECT_THROW(argmax({}), ConfigError);
}
