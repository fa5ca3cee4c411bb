#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "srlab/noise.hpp"

namespace srlab::rds {

/// f(t, x) = alpha x - beta x^3 + amplitude cos(nu t): the overdamped
/// periodically forced double well.
struct DuffingDrift {
    double alpha = 1.0;
    double beta = 1.0;
    double amplitude = 0.0;
    double nu = 1.0;

    void validate() const;
    double period() const noexcept { return 2.0 * std::numbers::pi / nu; }
    double operator()(double t, double x) const noexcept {
        return alpha * x - beta * x * x * x + amplitude * std::cos(nu * t);
    }
    double slope(double x) const noexcept { return alpha - 3.0 * beta * x * x; }
};

/// Scalar drift f(t, x), periodic in t with period(). Duffing drifts are
/// evaluated inline; anything else goes through a type-erased callable.
class Drift {
public:
    using Fn = std::function<double(double t, double x)>;

    static Drift duffing(const DuffingDrift& params);
    // f = -rate * x. Autonomous, so any positive period is valid.
    static Drift linear(double rate, double period);
    static Drift custom(Fn value, Fn slope, double period);

    double operator()(double t, double x) const {
        return duffing_ ? (*duffing_)(t, x) : value_(t, x);
    }
    double slope(double t, double x) const {
        return duffing_ ? duffing_->slope(x) : slope_(t, x);
    }
    double period() const noexcept { return period_; }
    const std::optional<DuffingDrift>& duffing_params() const noexcept { return duffing_; }

private:
    Drift() = default;
    std::optional<DuffingDrift> duffing_;
    Fn value_;
    Fn slope_;
    double period_ = 0.0;
};

double drift_eval(const DuffingDrift& drift, double t, double x) noexcept;

/// dx = f(t, x) dt + sigma dW.
struct SdeSystem {
    Drift drift;
    double sigma = 0.0;

    void validate() const;
};

// Largest |x| for which a state is flagged as a numerical blowup.
inline constexpr double kBlowupBound = 1e6;

/// Step size dt = period / steps_per_period with steps_per_period a multiple of
/// `multiple`, chosen closest to nominal_dt. Keeps the period, its halves and
/// K-phase points on the grid.
struct StepGrid {
    double dt = 0.0;
    std::int64_t steps_per_period = 0;
};
StepGrid aligned_step(double period, double nominal_dt, std::int64_t multiple = 64);

// Euler-Maruyama: n steps from absolute index k0, increments read from path at
// the same absolute indices. This is X(k0*dt + n*dt, k0*dt, omega, x0).
double evolve_steps(const SdeSystem& system, const noise::WienerGrid& path, std::int64_t k0,
                    std::int64_t n, double x0);

// evolve over [tau, tau + t]; tau and t must lie on the path grid.
double evolve(const SdeSystem& system, const noise::WienerGrid& path, double tau, double t,
              double x0);

// States at every `record_every`-th grid point of [tau, tau + t], first entry x0.
std::vector<double> trajectory(const SdeSystem& system, const noise::WienerGrid& path,
                               double tau, double t, double x0, std::int64_t record_every = 1);

// Cocycle Phi(t, tau, omega) x in base-flow form: the noise origin sits at the
// initial time, so omega's increments on [0, t] drive the drift on [tau, tau + t].
double cocycle(const SdeSystem& system, const noise::WienerGrid& omega, double tau, double t,
               double x);

// Explicit Euler for dZ/dt = f(t, Z + O_t) + O_t.
double rode_evolve(const SdeSystem& system, const noise::WienerGrid& path, double tau, double t,
                   double z0, const noise::OUSample& ou);
std::vector<double> rode_trajectory(const SdeSystem& system, const noise::WienerGrid& path,
                                    double tau, double t, double z0, const noise::OUSample& ou);

// Classical RK4 for the noiseless equation dx/dt = f(t, x). Oracle use only.
double rk4_reference(const Drift& drift, double t0, double t, double x0, double h);

struct DissipativityConstants {
    double l1 = 0.0;
    double l2 = 0.0;
};

// Constants with (x1 - x2)(f(t,x1) - f(t,x2)) <= L1 - L2 |x1 - x2|^2 for all t, x1, x2.
// Any L2 > 0 works with L1 = (alpha + L2)^2 / beta; default L2 = alpha.
DissipativityConstants dissipativity_constants(const DuffingDrift& drift,
                                               std::optional<double> l2 = std::nullopt);

// (x1 - x2)(f(t,x1) - f(t,x2)) + L2 |x1 - x2|^2, to be compared against L1.
double dissipativity_lhs(const DuffingDrift& drift, double t, double x1, double x2, double l2) noexcept;

// The EM map x -> x + f dt is nondecreasing while 1 + f_x dt >= 0.
// Largest dt keeping it monotone on |x| <= radius (infinity if unconstrained).
double em_monotone_dt_bound(const DuffingDrift& drift, double radius) noexcept;
// Largest radius on which the EM map with step dt is monotone.
double em_monotone_radius(const DuffingDrift& drift, double dt) noexcept;

bool order_preservation_check(const SdeSystem& system, const noise::WienerGrid& path, double tau,
                              double t, double x, double y);

// ---- discrete-time two-periodic fixture ----------------------------------

struct AffineMap {
    double slope = 1.0;
    double offset = 0.0;

    double operator()(double x) const noexcept { return slope * x + offset; }
    bool strictly_monotone() const noexcept { return std::isfinite(slope) && slope != 0.0; }
};

/// Four homeomorphisms h^i_j, map i used at even (0) or odd (1) times and
/// symbol j drawn with probability p_j.
struct DiscretePeriodicRDS {
    std::array<std::array<AffineMap, 2>, 2> maps{};  // maps[parity][symbol]
    double p0 = 0.5;
    double p1 = 0.5;

    void validate() const;
    const AffineMap& map(std::int64_t time, int symbol) const noexcept;

    static DiscretePeriodicRDS standard();
};

/// Two-sided Bernoulli symbol sequence with left shift, drawn from a
/// counter-based stream so every coordinate is a pure function of the seed.
class SymbolSequence {
public:
    SymbolSequence(std::uint64_t seed, double p1) : seed_(seed), p1_(p1) {}

    int operator[](std::int64_t i) const noexcept;
    SymbolSequence shifted(std::int64_t k) const noexcept;

private:
    std::uint64_t seed_;
    double p1_;
    std::int64_t offset_ = 0;
};

// phi(n, m, omega, x): apply h^{(m+j) mod 2}_{omega_j} for j = 0..n-1.
double discrete_step(const DiscretePeriodicRDS& rds, std::int64_t n, std::int64_t m,
                     const SymbolSequence& omega, double x);
// x, phi(1, ...), ..., phi(n, ...).
std::vector<double> discrete_orbit(const DiscretePeriodicRDS& rds, std::int64_t n, std::int64_t m,
                                   const SymbolSequence& omega, double x);

}  // namespace srlab::rds
