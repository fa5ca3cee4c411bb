#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "srlab/errors.hpp"
#include "srlab/noise.hpp"
#include "srlab/rds.hpp"

using namespace srlab;
using namespace srlab::rds;

namespace {

const DuffingDrift kPaper{1.0, 1.0, 0.12, 0.001};
const DuffingDrift kFast{1.0, 1.0, 0.12, 0.1};

SdeSystem duffing_system(const DuffingDrift& d, double sigma) { return {Drift::duffing(d), sigma}; }

}  // namespace

TEST(Drift, PaperParametersAtOrigin) { EXPECT_DOUBLE_EQ(drift_eval(kPaper, 0.0, 0.0), 0.12); }

TEST(Drift, WellBottomsAreFixedWithoutForcing) {
    const DuffingDrift d{2.0, 0.5, 0.0, 0.3};
    EXPECT_NEAR(drift_eval(d, 1.7, std::sqrt(4.0)), 0.0, 1e-12);
    EXPECT_NEAR(drift_eval(d, 1.7, -std::sqrt(4.0)), 0.0, 1e-12);
}

TEST(Drift, PeriodicInTime) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> ts(0.0, 100.0), xs(-3.0, 3.0);
    const double T = kFast.period();
    for (int i = 0; i < 1000; ++i) {
        const double t = ts(rng), x = xs(rng);
        // cos evaluated at nu (t + T) = nu t + 2 pi carries a rounding error of
        // a few ulp of the argument, scaled by A
        const double slack = kFast.amplitude * 4.0 * std::numeric_limits<double>::epsilon() * (kFast.nu * t + 2.0 * M_PI);
        ASSERT_NEAR(drift_eval(kFast, t + T, x), drift_eval(kFast, t, x), slack + 2.0 * std::numeric_limits<double>::epsilon() * std::abs(drift_eval(kFast, t, x)));
    }
}

TEST(Drift, InvalidParametersRejected) {
    EXPECT_THROW(Drift::duffing({0.0, 1.0, 0.1, 0.1}), ConfigError);
    EXPECT_THROW(Drift::duffing({1.0, -1.0, 0.1, 0.1}), ConfigError);
    EXPECT_THROW(Drift::duffing({1.0, 1.0, -0.1, 0.1}), ConfigError);
    EXPECT_THROW(Drift::duffing({1.0, 1.0, 0.1, 0.0}), ConfigError);
}

TEST(AlignedStep, WholeStepsPerPeriod) {
    const StepGrid g = aligned_step(kFast.period(), 0.01);
    EXPECT_EQ(g.steps_per_period % 64, 0);
    EXPECT_NEAR(g.dt, 0.01, 0.001);
    EXPECT_NEAR(g.dt * g.steps_per_period, kFast.period(), 1e-12);
}

TEST(Evolve, ZeroDurationIsIdentity) {
    const auto sys = duffing_system(kFast, 0.5);
    const noise::WienerGrid p(1, 0.01, 0, 100);
    EXPECT_EQ(evolve(sys, p, 0.3, 0.0, 1.234), 1.234);
    EXPECT_EQ(cocycle(sys, p, 0.3, 0.0, 1.234), 1.234);
}

TEST(Evolve, NoiselessRelaxationMatchesRk4) {
    const DuffingDrift d{1.0, 1.0, 0.0, 0.1};
    const auto sys = duffing_system(d, 0.0);
    const double dt = 1e-3;
    const noise::WienerGrid p(1, dt, 0, 10000);
    double prev = 2.0;
    for (int j = 1; j <= 10; ++j) {
        const double x = evolve(sys, p, 0.0, j * 1.0, 2.0);
        const double ref = rk4_reference(Drift::duffing(d), 0.0, j * 1.0, 2.0, 1e-3);
        // closed form: x^2 = 1 / (1 - (1 - 1/x0^2) e^{-2t})
        const double exact = 1.0 / std::sqrt(1.0 - 0.75 * std::exp(-2.0 * j));
        EXPECT_NEAR(ref, exact, 1e-10);
        EXPECT_NEAR(x, exact, 2e-3);
        EXPECT_LT(x, prev);
        EXPECT_GT(x, 1.0);
        prev = x;
    }
}

TEST(Evolve, CompositionIsExactOnAlignedGrid) {
    const auto sys = duffing_system(kFast, 0.5);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> steps(0, 3000);
    for (int i = 0; i < 100; ++i) {
        const std::int64_t a = steps(rng), b = steps(rng), k0 = steps(rng) - 1500;
        const noise::WienerGrid p(rng(), 0.01, k0, k0 + a + b);
        const double x0 = std::uniform_real_distribution<double>(-2, 2)(rng);
        const double mid = evolve_steps(sys, p, k0, a, x0);
        ASSERT_EQ(evolve_steps(sys, p, k0, a + b, x0), evolve_steps(sys, p, k0 + a, b, mid));
    }
}

TEST(Cocycle, BaseFlowComposition) {
    // Phi(t + s, tau, omega) = Phi(t, tau + s, theta_s omega) Phi(s, tau, omega)
    const auto sys = duffing_system(kFast, 0.5);
    const double dt = 0.01;
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> steps(0, 2000);
    for (int i = 0; i < 100; ++i) {
        const double s = steps(rng) * dt, t = steps(rng) * dt, tau = (steps(rng) - 1000) * dt;
        const noise::WienerGrid omega(rng(), dt, 0, 4001);
        const double x = std::uniform_real_distribution<double>(-2, 2)(rng);
        const double lhs = cocycle(sys, omega, tau, t + s, x);
        const double rhs = cocycle(sys, noise::shift(omega, s), tau + s, t, cocycle(sys, omega, tau, s, x));
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(Evolve, CoverageGapThrows) {
    const auto sys = duffing_system(kFast, 0.5);
    const noise::WienerGrid p(1, 0.01, 0, 100);
    EXPECT_THROW(evolve(sys, p, 0.0, 1.01, 0.0), InsufficientHistoryError);
    EXPECT_THROW(evolve(sys, p, -0.01, 0.5, 0.0), InsufficientHistoryError);
    EXPECT_THROW(evolve(sys, p, 0.0, 0.123, 0.0), GridAlignmentError);
}

TEST(Evolve, BlowupDetected) {
    const auto sys = duffing_system(kFast, 0.5);
    const noise::WienerGrid p(1, 0.5, 0, 100);
    try {
        evolve(sys, p, 0.0, 10.0, 50.0);
        FAIL() << "expected blowup";
    } catch (const NumericalBlowupError& e) {
        EXPECT_GT(std::abs(e.state()), kBlowupBound);
    }
}

TEST(Rode, ZeroNoiseCollapsesToDeterministicEuler) {
    const auto sys = duffing_system(kFast, 0.0);
    const double dt = 0.01;
    const noise::WienerGrid p(1, dt, -2000, 6000);
    const noise::OUSample ou = noise::ou_process(p, 0.0, 20.0, 0.0);
    const auto z = rode_trajectory(sys, p, 0.0, 50.0, 0.4, ou);
    double x = 0.4;
    for (int j = 0; j < 5000; ++j) {
        x += drift_eval(kFast, j * dt, x) * dt;
        ASSERT_EQ(z[static_cast<std::size_t>(j + 1)], x);
    }
}

TEST(Rode, TransformOfOuStartIsZero) {
    const auto sys = duffing_system(kFast, 0.5);
    const noise::WienerGrid p(2, 0.01, -2000, 100);
    const noise::OUSample ou = noise::ou_process(p, 0.5, 20.0, 0.0);
    const double x0 = ou.at(0);
    EXPECT_EQ(rode_evolve(sys, p, 0.0, 0.0, x0 - ou.at(0), ou), 0.0);
}

TEST(Rode, ConjugacyResidualIsFirstOrder) {
    const auto sys = duffing_system(kFast, 0.5);
    const StepGrid g = aligned_step(kFast.period(), 0.01, 128);
    const double T = kFast.period();
    const auto residual = [&](const noise::WienerGrid& p) {
        const noise::OUSample ou = noise::ou_process(p, sys.sigma, 20.0, 0.0);
        const auto x = trajectory(sys, p, 0.0, T, 0.3);
        const auto z = rode_trajectory(sys, p, 0.0, T, 0.3 - ou.at(0), ou);
        double m = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) m = std::max(m, std::abs(x[j] - (z[j] + ou.at(j))));
        return m;
    };
    const auto back = static_cast<std::int64_t>(std::ceil(21.0 / g.dt));
    double ratio = 0.0;
    for (int seed = 1; seed <= 5; ++seed) {
        const noise::WienerGrid fine(seed, 0.5 * g.dt, -2 * back, 2 * g.steps_per_period + 2);
        const double r1 = residual(noise::coarsen(fine, 2));
        EXPECT_LT(r1, 0.2);
        ratio += r1 / residual(fine);
    }
    EXPECT_NEAR(ratio / 5, 2.0, 0.3);
}

TEST(Dissipativity, DefaultConstants) {
    const auto c = dissipativity_constants({1.0, 1.0, 0.12, 0.1});
    EXPECT_EQ(c.l1, 4.0);
    EXPECT_EQ(c.l2, 1.0);
    const auto c2 = dissipativity_constants({2.0, 0.5, 0.0, 1.0}, 1.0);
    EXPECT_DOUBLE_EQ(c2.l1, 18.0);
    EXPECT_THROW(dissipativity_constants(kFast, 0.0), ConfigError);
}

TEST(Dissipativity, HoldsOnRandomTriples) {
    const auto c = dissipativity_constants(kFast);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> xs(-1e3, 1e3), ts(0.0, kFast.period());
    for (int i = 0; i < 100000; ++i) {
        const double x1 = xs(rng), x2 = xs(rng);
        ASSERT_LE(dissipativity_lhs(kFast, ts(rng), x1, x2, c.l2), c.l1 + 1e-9 * (1 + x1 * x1 + x2 * x2));
    }
    EXPECT_EQ(dissipativity_lhs(kFast, 0.3, 1.5, 1.5, c.l2), 0.0);
}

TEST(Dissipativity, GridMaximumMatchesBound) {
    // brute-force maximum of the left side; independent of the closed form
    const auto c = dissipativity_constants(kFast);
    double best = -1e300;
    for (int i = 0; i <= 400; ++i) {
        for (int j = 0; j <= 400; ++j) {
            const double x1 = -10.0 + 0.05 * i, x2 = -10.0 + 0.05 * j;
            const double lhs = (x1 - x2) * ((x1 - x1 * x1 * x1) - (x2 - x2 * x2 * x2)) + (x1 - x2) * (x1 - x2);
            best = std::max(best, lhs);
        }
    }
    EXPECT_LE(best, c.l1 + 1e-9);
    EXPECT_GT(best, 0.9 * c.l1);  // the bound is nearly attained
}

TEST(OrderPreservation, EqualStatesTriviallyOrdered) {
    const auto sys = duffing_system(kFast, 0.5);
    const noise::WienerGrid p(1, 0.01, 0, 1000);
    EXPECT_TRUE(order_preservation_check(sys, p, 0.0, 10.0, 0.7, 0.7));
}

TEST(OrderPreservation, HoldsWithinMonotoneBound) {
    const auto sys = duffing_system(kPaper, 0.285);
    const StepGrid g = aligned_step(kPaper.period(), 0.01);
    ASSERT_LE(g.dt, em_monotone_dt_bound(kPaper, 3.0));
    int ok = 0;
    for (int seed = 0; seed < 20; ++seed) {
        const noise::WienerGrid p(seed, g.dt, 0, g.steps_per_period);
        ok += order_preservation_check(sys, p, 0.0, kPaper.period(), -1.5, 1.5);
    }
    EXPECT_EQ(ok, 20);
}

TEST(OrderPreservation, ViolatedBeyondBound) {
    // One EM step with dt = 0.5 from x = 1.9 lands below the step from x = 1.5:
    // the map x -> x + (x - x^3) dt is decreasing where 1 + (1 - 3x^2) dt < 0.
    const DuffingDrift d{1.0, 1.0, 0.0, 0.1};
    const auto sys = duffing_system(d, 0.0);
    const noise::WienerGrid p(1, 0.5, 0, 1);
    EXPECT_GT(0.5, em_monotone_dt_bound(d, 1.9));
    EXPECT_FALSE(order_preservation_check(sys, p, 0.0, 0.5, 1.5, 1.9));
    EXPECT_DOUBLE_EQ(em_monotone_radius(d, em_monotone_dt_bound(d, 1.9)), 1.9);
}

TEST(Discrete, StandardFixtureIsValid) {
    const auto rds = DiscretePeriodicRDS::standard();
    EXPECT_NO_THROW(rds.validate());
    EXPECT_DOUBLE_EQ(rds.p0 + rds.p1, 1.0);
    for (const auto& row : rds.maps) {
        for (const auto& m : row) EXPECT_TRUE(m.strictly_monotone());
    }
    auto bad = rds;
    bad.p0 = 0.3;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = rds;
    bad.maps[1][0].slope = 0.0;
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Discrete, StepComposesMapsByParityAndSymbol) {
    const auto rds = DiscretePeriodicRDS::standard();
    const SymbolSequence omega(11, rds.p1);
    double x = 0.3;
    for (int j = 0; j < 6; ++j) x = rds.maps[static_cast<std::size_t>((3 + j) % 2)][static_cast<std::size_t>(omega[j])](x);
    EXPECT_EQ(discrete_step(rds, 6, 3, omega, 0.3), x);
    const auto orbit = discrete_orbit(rds, 6, 3, omega, 0.3);
    ASSERT_EQ(orbit.size(), 7u);
    EXPECT_EQ(orbit.front(), 0.3);
    EXPECT_EQ(orbit.back(), x);
}

TEST(Discrete, CocycleLawsOnRandomCases) {
    const auto rds = DiscretePeriodicRDS::standard();
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> small(0, 15);
    std::uniform_real_distribution<double> xs(-10, 10);
    for (int i = 0; i < 1000; ++i) {
        const SymbolSequence omega(rng(), rds.p1);
        const int n = small(rng), k = small(rng), m = small(rng) - 7;
        const double x = xs(rng);
        ASSERT_EQ(discrete_step(rds, 0, m, omega, x), x);
        ASSERT_EQ(discrete_step(rds, n, m + 2, omega, x), discrete_step(rds, n, m, omega, x));
        ASSERT_EQ(discrete_step(rds, n + k, m, omega, x),
                  discrete_step(rds, n, m + k, omega.shifted(k), discrete_step(rds, k, m, omega, x)));
    }
}

TEST(Discrete, SymbolFrequencies) {
    const SymbolSequence omega(5, 0.6);
    int ones = 0;
    for (int i = -50000; i < 50000; ++i) ones += omega[i];
    EXPECT_NEAR(ones / 100000.0, 0.6, 4.0 * std::sqrt(0.24 / 100000));
    EXPECT_EQ(omega.shifted(3)[4], omega[7]);
}
