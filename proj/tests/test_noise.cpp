#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "srlab/errors.hpp"
#include "srlab/noise.hpp"

using namespace srlab;
using namespace srlab::noise;

namespace {

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double variance_of(std::span<const double> v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (v.size() - 1);
}

}  // namespace

// Known-answer vectors published with the Random123 library.
TEST(Philox, KnownAnswerVectors) {
    EXPECT_EQ(philox4x32_10({0u, 0u, 0u, 0u}, 0u),
              (PhiloxBlock{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, 0xffffffffffffffffull),
              (PhiloxBlock{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, 0x299f31d0a4093822ull),
              (PhiloxBlock{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Noise, NormalsArePureFunctionsOfSeedAndCounter) {
    EXPECT_EQ(standard_normal(7, 123), standard_normal(7, 123));
    EXPECT_NE(standard_normal(7, 123), standard_normal(8, 123));
    EXPECT_NE(standard_normal(7, 123), standard_normal(7, 124));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Noise, UniformsLieInUnitInterval) {
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = uniform01(3, i);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / 100000));
}

TEST(NewPath, DegenerateWindowIsEmpty) {
    const WienerGrid p = new_path(5, 0.01, 0.0, 0.0);
    EXPECT_EQ(p.size(), 0u);
    EXPECT_EQ(p.value_at(0), 0.0);
}

TEST(NewPath, MisalignedBoundsThrow) {
    EXPECT_THROW(new_path(5, 0.01, 0.0, 0.0123), GridAlignmentError);
    EXPECT_THROW(new_path(5, 0.01, 0.005, 1.0), GridAlignmentError);
    EXPECT_THROW(new_path(5, 0.01, 1.0, 0.0), ConfigError);
}

TEST(NewPath, IncrementMomentsMatchBrownianMotion) {
    const double dt = 0.01;
    const int n = 1000000;
    const WienerGrid p = new_path(11, dt, 0.0, n * dt);
    ASSERT_EQ(p.size(), static_cast<std::size_t>(n));
    EXPECT_LT(std::abs(mean_of(p.increments())), 4.0 * std::sqrt(dt / n));
    EXPECT_NEAR(variance_of(p.increments()) / dt, 1.0, 0.01);
}

TEST(NewPath, DisjointIncrementsUncorrelated) {
    const int n = 200000;
    const WienerGrid p(21, 1.0, 0, 2 * n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += p.increment(i) * p.increment(n + i);
    EXPECT_LT(std::abs(s / n), 4.0 / std::sqrt(n));
}

TEST(NewPath, IncrementOutsideRangeThrows) {
    const WienerGrid p(1, 0.1, -5, 5);
    EXPECT_NO_THROW(p.increment(-5));
    EXPECT_THROW(p.increment(5), InsufficientHistoryError);
    EXPECT_THROW(p.increment(-6), InsufficientHistoryError);
    EXPECT_EQ(p.generated_increment(-6), extend_backward(p, -0.6).increment(-6));
}

TEST(Extend, SameBoundIsIdentity) {
    const WienerGrid p = new_path(3, 0.01, -1.0, 1.0);
    EXPECT_EQ(extend_backward(p, -1.0), p);
    EXPECT_EQ(extend_forward(p, 1.0), p);
}

TEST(Extend, ExistingIncrementsUnchanged) {
    const WienerGrid p = new_path(3, 0.01, -1.0, 1.0);
    const WienerGrid q = extend_backward(p, -5.0);
    for (std::int64_t k = p.k_min(); k < p.k_max(); ++k) ASSERT_EQ(q.increment(k), p.increment(k));
    const WienerGrid r = extend_forward(q, 3.0);
    for (std::int64_t k = q.k_min(); k < q.k_max(); ++k) ASSERT_EQ(r.increment(k), q.increment(k));
    EXPECT_EQ(r.value_at(0), 0.0);
}

TEST(Extend, IndependentExtensionsAgree) {
    const double T = 2.0 * M_PI / 0.1;
    const double dt = T / 6272;
    const WienerGrid p(9, dt, 0, 6272);
    const WienerGrid a = extend_backward(p, -10 * T);
    const WienerGrid b = extend_backward(p, -20 * T);
    for (std::int64_t k = a.k_min(); k < a.k_max(); ++k) ASSERT_EQ(a.increment(k), b.increment(k));
}

TEST(Extend, WrongDirectionThrows) {
    const WienerGrid p = new_path(3, 0.01, -1.0, 1.0);
    EXPECT_THROW(extend_backward(p, 0.0), BadExtensionError);
    EXPECT_THROW(extend_forward(p, 0.5), BadExtensionError);
}

TEST(Shift, ZeroIsIdentity) {
    const WienerGrid p = new_path(4, 0.01, -1.0, 1.0);
    EXPECT_EQ(shift(p, 0.0), p);
}

TEST(Shift, IncrementsMoveByS) {
    const WienerGrid p = new_path(4, 0.01, -2.0, 2.0);
    const WienerGrid q = shift(p, 0.5);
    EXPECT_EQ(q.k_min(), p.k_min() - 50);
    for (std::int64_t k = q.k_min(); k < q.k_max(); ++k) ASSERT_EQ(q.increment(k), p.increment(k + 50));
}

TEST(Shift, FlowProperty) {
    const WienerGrid p = new_path(4, 0.01, -3.0, 3.0);
    const WienerGrid a = shift(shift(p, 0.7), -0.2);
    const WienerGrid b = shift(p, 0.5);
    EXPECT_EQ(a.k_min(), b.k_min());
    for (std::int64_t k = a.k_min(); k < a.k_max(); ++k) ASSERT_EQ(a.increment(k), b.increment(k));
}

TEST(Shift, PathValuesAreRecentred) {
    const WienerGrid p = new_path(4, 0.01, -3.0, 3.0);
    const double s = 1.3;
    const WienerGrid q = shift(p, s);
    const std::int64_t m = 130;
    EXPECT_EQ(q.value_at(0), 0.0);
    for (std::int64_t k = q.k_min(); k <= q.k_max(); k += 37) {
        ASSERT_NEAR(q.value_at(k), p.value_at(k + m) - p.value_at(m), 1e-12);
    }
}

TEST(Shift, MisalignedThrows) {
    const WienerGrid p = new_path(4, 0.01, -1.0, 1.0);
    EXPECT_THROW(shift(p, 0.0123), GridAlignmentError);
}

TEST(Shift, CommutesWithExtension) {
    const WienerGrid p = new_path(4, 0.01, -1.0, 1.0);
    const double a = -4.0, s = 0.6;
    const WienerGrid lhs = shift(extend_backward(p, a), s);
    const WienerGrid rhs = extend_backward(shift(p, s), a - s);
    EXPECT_EQ(lhs.k_min(), rhs.k_min());
    for (std::int64_t k = lhs.k_min(); k < lhs.k_max(); ++k) ASSERT_EQ(lhs.increment(k), rhs.increment(k));
}

TEST(Coarsen, SumsFineIncrements) {
    const WienerGrid fine(6, 0.005, -400, 400);
    const WienerGrid coarse = coarsen(fine, 2);
    EXPECT_DOUBLE_EQ(coarse.dt(), 0.01);
    for (std::int64_t k = coarse.k_min(); k < coarse.k_max(); ++k) {
        ASSERT_NEAR(coarse.increment(k), fine.increment(2 * k) + fine.increment(2 * k + 1), 1e-15);
    }
    const WienerGrid longer = extend_backward(coarse, -10.0);
    EXPECT_NEAR(longer.increment(-500), fine.generated_increment(-1000) + fine.generated_increment(-999), 1e-15);
    EXPECT_THROW(coarsen(WienerGrid(6, 0.005, -401, 400), 2), GridAlignmentError);
}

TEST(Ou, ZeroSigmaIsZero) {
    const WienerGrid p = new_path(1, 0.01, -30.0, 10.0);
    const OUSample ou = ou_process(p, 0.0, 20.0, 0.0);
    for (double v : ou.values) ASSERT_EQ(v, 0.0);
}

TEST(Ou, InsufficientHistoryThrows) {
    const WienerGrid p = new_path(1, 0.01, -10.0, 10.0);
    EXPECT_THROW(ou_process(p, 0.5, 20.0, 0.0), InsufficientHistoryError);
    EXPECT_THROW(ou_process(p, 0.5, -1.0, 0.0), ConfigError);
}

TEST(Ou, StationaryVarianceAndAutocorrelation) {
    const double sigma = 0.7, dt = 0.1;
    const int n = 1000000;
    const WienerGrid p(31, dt, -200, n);
    const OUSample ou = ou_process(p, sigma, 20.0, 0.0);
    std::span<const double> v(ou.values.data(), n);
    const double var = variance_of(v);
    EXPECT_NEAR(var / (0.5 * sigma * sigma), 1.0, 0.03);

    const double m = mean_of(v);
    for (int lag : {5, 10, 20}) {
        double c = 0.0;
        for (int i = 0; i + lag < n; ++i) c += (v[i] - m) * (v[i + lag] - m);
        c /= (n - lag) * var;
        // integrated autocorrelation time of OU is 1, so n dt / 2 effective samples
        EXPECT_NEAR(c, std::exp(-lag * dt), 4.0 / std::sqrt(n * dt / 2.0)) << "lag " << lag;
    }
}

TEST(Ou, DefaultStartFollowsBurnIn) {
    const WienerGrid p = new_path(1, 0.01, -30.0, 10.0);
    const OUSample a = ou_process(p, 0.5);
    EXPECT_EQ(a.k_start, p.k_min() + 2000);
    const OUSample b = ou_process(p, 0.5, 20.0, a.k_start * 0.01);
    EXPECT_EQ(a.values, b.values);
    EXPECT_THROW(a.at(a.k_start - 1), InsufficientHistoryError);
}
