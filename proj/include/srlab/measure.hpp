#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srlab/noise.hpp"
#include "srlab/pullback.hpp"
#include "srlab/rds.hpp"

namespace srlab::measure {

/// Uniform cells on [x_min, x_max].
struct GridSpec {
    double x_min = -5.0;
    double x_max = 5.0;
    int n_bins = 500;

    void validate() const;
    double width() const noexcept { return (x_max - x_min) / n_bins; }
    double lower(int i) const noexcept { return x_min + width() * i; }
    double center(int i) const noexcept { return x_min + width() * (i + 0.5); }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Closed interval, possibly unbounded or empty.
struct Range {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    static Range all() { return {}; }
    static Range empty() { return {1.0, 0.0}; }
    static Range at_most(double x) { return {-std::numeric_limits<double>::infinity(), x}; }
    static Range at_least(double x) { return {x, std::numeric_limits<double>::infinity()}; }

    bool is_empty() const noexcept { return lo > hi; }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

/// Cell probabilities of a density on a GridSpec.
class DensityGrid {
public:
    DensityGrid() = default;
    DensityGrid(GridSpec grid, std::vector<double> masses);

    const GridSpec& grid() const noexcept { return grid_; }
    const std::vector<double>& masses() const noexcept { return masses_; }
    double mass(int i) const { return masses_.at(static_cast<std::size_t>(i)); }
    double density(int i) const { return mass(i) / grid_.width(); }
    double total() const noexcept;

    // Masses are >= 0 and sum to 1 within tolerance; throws QualityError otherwise.
    void validate(double tolerance = 1e-12) const;

    // Probability of the range; a cell cut by an endpoint contributes the
    // proportional part of its mass.
    double mass_in(const Range& range) const noexcept;
    double mean() const noexcept;

private:
    GridSpec grid_;
    std::vector<double> masses_;
};

double l1_distance(const DensityGrid& a, const DensityGrid& b);
// Merges `factor` adjacent cells; n_bins must be divisible by factor.
DensityGrid coarsen(const DensityGrid& d, int factor);
// Density of -X; the grid must be symmetric about 0.
DensityGrid reflect(const DensityGrid& d);
DensityGrid uniform_density(const GridSpec& grid);

// Cell indices of prominent local maxima of a lightly smoothed density.
// Maxima lower than min_height * global max are ignored; neighbouring maxima
// whose separating valley does not dip below (1 - min_dip) of the smaller peak
// are merged.
std::vector<int> find_modes(const DensityGrid& d, double min_height = 0.05, double min_dip = 0.2,
                            int smoothing = 5);

enum class Method { Mc, Pde };
std::string to_string(Method m);
Method parse_method(const std::string& name);

/// rho_t at K equally spaced phases t_k = tau + k T / K of one period.
struct PeriodicMeasure {
    double period = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
    Method method = Method::Pde;
    std::vector<double> phase_times;
    std::vector<DensityGrid> densities;

    // MC quality
    std::uint64_t seed = 0;
    std::int64_t n_paths = 0;
    std::int64_t drops = 0;
    std::int64_t clamped = 0;
    // PDE quality
    double tol = 0.0;
    int periods_run = 0;
    double cycle_distance = 0.0;

    std::size_t phases() const noexcept { return densities.size(); }
    const GridSpec& grid() const { return densities.front().grid(); }
    void validate() const;
};

struct McOptions {
    std::int64_t n_paths = 10000;
    int phases = 16;
    int spinup_periods = 5;
    GridSpec grid;
    std::uint64_t seed = 1;
    double tau = 0.0;
    double dt = 0.01;  // nominal; rounded so the period holds a whole number of steps
    double start = 0.0;
    // Replace forward spin-up by a pullback of each path to tau.
    bool pullback_sampling = false;
    pullback::PullbackConfig pullback;
    unsigned workers = 0;  // 0: hardware concurrency
    double max_drop_fraction = 0.01;
};

// Histogram over n_paths independent noise paths. Each particle starts at
// `start` spinup_periods before tau and is recorded at the K phases of the
// following period. Paths that blow up are dropped; more than
// max_drop_fraction drops raises QualityError.
PeriodicMeasure mc_periodic_measure(const rds::SdeSystem& system, const McOptions& options);

struct FpOptions {
    GridSpec grid;
    double dt = 0.01;  // nominal; rounded to a multiple of period / K
    int max_periods = 200;
    double tol = 1e-6;
    int phases = 16;
    double tau = 0.0;
};

// Half width L the grid has to cover, L = 2 max(1, sqrt(alpha / beta)) + 5 sigma.
double required_half_width(const rds::SdeSystem& system);

/// Conservative finite-volume solver for the Kolmogorov forward equation
///   d rho / dt = -d/dx (f(t, x) rho) + (sigma^2 / 2) d^2 rho / dx^2
/// with zero-flux walls. Exponentially fitted (Scharfetter-Gummel) face fluxes,
/// backward Euler in time: every step is one tridiagonal M-matrix solve, so
/// mass is conserved, positivity holds, and there is no CFL restriction.
class FokkerPlanckSolver {
public:
    FokkerPlanckSolver(const rds::SdeSystem& system, GridSpec grid, double dt, double t0);

    void set_masses(std::vector<double> masses);
    const std::vector<double>& masses() const noexcept { return masses_; }
    double time() const noexcept { return static_cast<double>(step_index_) * dt_; }
    double dt() const noexcept { return dt_; }
    std::int64_t step_index() const noexcept { return step_index_; }

    void step();
    void advance(std::int64_t steps);

private:
    rds::SdeSystem system_;
    GridSpec grid_;
    double dt_;
    std::int64_t step_index_;
    double diffusion_;
    std::vector<double> masses_;
    std::vector<double> face_x_;
    std::vector<double> lower_, diag_, upper_, scratch_;
};

// Evolves from the uniform density at tau until every phase of consecutive
// cycles agrees within tol in L1; ConvergenceError after max_periods.
PeriodicMeasure fp_periodic_measure(const rds::SdeSystem& system, const FpOptions& options);

// Frequency with which Phi(nT, tau, omega) A(tau, omega), n = 1..N, visits B.
double birkhoff_frequency(const rds::SdeSystem& system, noise::WienerGrid& path,
                          const pullback::RandomPointSample& sample, const Range& b, int n);

// Phase average (1/T) int rho_t dt on the K-phase grid; needs K >= 8.
DensityGrid average_measure(const PeriodicMeasure& pm);

// Sampling step incommensurate with the period: period * golden ratio, on the grid.
double incommensurate_step(double period, double dt);

// Same as birkhoff_frequency with time step t_prime instead of T.
double incommensurate_frequency(const rds::SdeSystem& system, noise::WienerGrid& path,
                                const pullback::RandomPointSample& sample, const Range& b,
                                double t_prime, int n);

}  // namespace srlab::measure
