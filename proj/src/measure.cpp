#include "srlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "srlab/errors.hpp"
#include "srlab/parallel.hpp"

namespace srlab::measure {

void GridSpec::validate() const {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw ConfigError("GridSpec: need finite bounds with x_min < x_max");
    }
    if (n_bins < 1) throw ConfigError("GridSpec: n_bins must be >= 1");
}

DensityGrid::DensityGrid(GridSpec grid, std::vector<double> masses)
    : grid_(grid), masses_(std::move(masses)) {
    grid_.validate();
    if (masses_.size() != static_cast<std::size_t>(grid_.n_bins)) {
        throw GridMismatchError("DensityGrid: mass count differs from n_bins");
    }
}

double DensityGrid::total() const noexcept {
    return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

void DensityGrid::validate(double tolerance) const {
    for (const double m : masses_) {
        if (!(m >= 0.0)) throw QualityError("DensityGrid: negative or NaN mass");
    }
    const double sum = total();
    if (std::abs(sum - 1.0) > tolerance) {
        std::ostringstream msg;
        msg << "DensityGrid: masses sum to " << sum;
        throw QualityError(msg.str());
    }
}

double DensityGrid::mass_in(const Range& range) const noexcept {
    if (range.is_empty()) return 0.0;
    const double w = grid_.width();
    double sum = 0.0;
    for (int i = 0; i < grid_.n_bins; ++i) {
        const double a = grid_.lower(i);
        const double lo = std::max(a, range.lo);
        const double hi = std::min(a + w, range.hi);
        if (hi <= lo) continue;
        sum += masses_[static_cast<std::size_t>(i)] * std::min(1.0, (hi - lo) / w);
    }
    return sum;
}

double DensityGrid::mean() const noexcept {
    double m = 0.0;
    for (int i = 0; i < grid_.n_bins; ++i) m += grid_.center(i) * masses_[static_cast<std::size_t>(i)];
    return m;
}

double l1_distance(const DensityGrid& a, const DensityGrid& b) {
    if (!(a.grid() == b.grid())) throw GridMismatchError("l1_distance: densities live on different grids");
    double d = 0.0;
    for (std::size_t i = 0; i < a.masses().size(); ++i) d += std::abs(a.masses()[i] - b.masses()[i]);
    return d;
}

DensityGrid coarsen(const DensityGrid& d, int factor) {
    const GridSpec& g = d.grid();
    if (factor < 1 || g.n_bins % factor != 0) {
        throw GridMismatchError("coarsen: n_bins is not divisible by the factor");
    }
    GridSpec coarse{g.x_min, g.x_max, g.n_bins / factor};
    std::vector<double> masses(static_cast<std::size_t>(coarse.n_bins), 0.0);
    for (int i = 0; i < g.n_bins; ++i) masses[static_cast<std::size_t>(i / factor)] += d.mass(i);
    return {coarse, std::move(masses)};
}

DensityGrid reflect(const DensityGrid& d) {
    const GridSpec& g = d.grid();
    if (std::abs(g.x_min + g.x_max) > 1e-12 * (g.x_max - g.x_min)) {
        throw GridMismatchError("reflect: grid is not symmetric about 0");
    }
    std::vector<double> masses(d.masses().rbegin(), d.masses().rend());
    return {g, std::move(masses)};
}

DensityGrid uniform_density(const GridSpec& grid) {
    grid.validate();
    return {grid, std::vector<double>(static_cast<std::size_t>(grid.n_bins), 1.0 / grid.n_bins)};
}

std::vector<int> find_modes(const DensityGrid& d, double min_height, double min_dip, int smoothing) {
    const int n = d.grid().n_bins;
    const int half = std::max(0, smoothing / 2);
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        int count = 0;
        for (int j = std::max(0, i - half); j <= std::min(n - 1, i + half); ++j, ++count) sum += d.mass(j);
        s[static_cast<std::size_t>(i)] = sum / count;
    }
    const double top = *std::max_element(s.begin(), s.end());
    if (!(top > 0.0)) return {};

    auto at = [&](int i) { return s[static_cast<std::size_t>(i)]; };
    std::vector<int> modes;
    for (int i = 0; i < n; ++i) {
        const bool rises = i == 0 || at(i) > at(i - 1);
        // plateau: walk to its right end
        int j = i;
        while (j + 1 < n && at(j + 1) == at(i)) ++j;
        const bool falls = j == n - 1 || at(j + 1) < at(j);
        if (rises && falls && at(i) >= min_height * top) {
            const int peak = (i + j) / 2;
            bool keep = true;
            while (!modes.empty()) {
                const int prev = modes.back();
                double valley = at(prev);
                for (int k = prev; k <= peak; ++k) valley = std::min(valley, at(k));
                if (valley < (1.0 - min_dip) * std::min(at(prev), at(peak))) break;
                // not separated: keep the taller one
                if (at(prev) >= at(peak)) {
                    keep = false;
                    break;
                }
                modes.pop_back();
            }
            if (keep) modes.push_back(peak);
        }
        i = j;
    }
    return modes;
}

std::string to_string(Method m) { return m == Method::Mc ? "mc" : "pde"; }

Method parse_method(const std::string& name) {
    if (name == "mc") return Method::Mc;
    if (name == "pde") return Method::Pde;
    throw ConfigError("unknown method '" + name + "' (expected mc or pde)");
}

void PeriodicMeasure::validate() const {
    if (densities.size() < 2) throw ConfigError("PeriodicMeasure: needs K >= 2 phases");
    if (phase_times.size() != densities.size()) throw ConfigError("PeriodicMeasure: phase count mismatch");
    for (std::size_t k = 0; k < densities.size(); ++k) {
        if (!(densities[k].grid() == densities.front().grid())) {
            throw GridMismatchError("PeriodicMeasure: phases use different grids");
        }
        densities[k].validate();
        if (k > 0 && !(phase_times[k] > phase_times[k - 1])) {
            throw ConfigError("PeriodicMeasure: phase times must increase");
        }
    }
    if (!(phase_times.back() < tau + period)) throw ConfigError("PeriodicMeasure: phases exceed one period");
}

// ---- Monte Carlo ----------------------------------------------------------

PeriodicMeasure mc_periodic_measure(const rds::SdeSystem& system, const McOptions& options) {
    system.validate();
    options.grid.validate();
    if (options.n_paths < 100) throw ConfigError("mc_periodic_measure: n_paths must be >= 100");
    if (options.spinup_periods < 1) throw ConfigError("mc_periodic_measure: spinup_periods must be >= 1");
    if (options.phases < 2) throw ConfigError("mc_periodic_measure: need K >= 2 phases");
    if (options.pullback_sampling) options.pullback.validate();

    const double period = system.drift.period();
    const rds::StepGrid steps = rds::aligned_step(period, options.dt, std::lcm<std::int64_t>(64, options.phases));
    const double dt = steps.dt;
    const std::int64_t per_phase = steps.steps_per_period / options.phases;
    const std::int64_t k_tau = noise::aligned_index(options.tau, dt);
    const std::int64_t k_start = k_tau - options.spinup_periods * steps.steps_per_period;
    const std::int64_t k_end = k_tau + steps.steps_per_period;

    const GridSpec& grid = options.grid;
    const std::size_t n_bins = static_cast<std::size_t>(grid.n_bins);
    const std::size_t phases = static_cast<std::size_t>(options.phases);
    const unsigned workers = resolve_workers(options.workers);

    struct Tally {
        std::vector<std::int64_t> counts;
        std::int64_t drops = 0;
        std::int64_t clamped = 0;
    };
    std::vector<Tally> tallies(workers);

    parallel_chunks(static_cast<std::size_t>(options.n_paths), workers,
                    [&](unsigned w, std::size_t begin, std::size_t end) {
        Tally& tally = tallies[w];
        tally.counts.assign(phases * n_bins, 0);
        std::vector<double> record(phases);
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t seed = noise::derive_seed(options.seed, i);
            try {
                noise::WienerGrid path(seed, dt, options.pullback_sampling ? k_tau : k_start, k_end);
                double x;
                if (options.pullback_sampling) {
                    const auto sample = pullback::random_point(system, path, options.tau, options.pullback);
                    if (!sample.converged) {
                        ++tally.drops;
                        continue;
                    }
                    x = sample.value;
                } else {
                    x = rds::evolve_steps(system, path, k_start, k_tau - k_start, options.start);
                }
                for (std::size_t k = 0; k < phases; ++k) {
                    if (k > 0) {
                        x = rds::evolve_steps(system, path, k_tau + static_cast<std::int64_t>(k - 1) * per_phase,
                                              per_phase, x);
                    }
                    record[k] = x;
                }
            } catch (const NumericalBlowupError&) {
                ++tally.drops;
                continue;
            }
            for (std::size_t k = 0; k < phases; ++k) {
                const double pos = (record[k] - grid.x_min) / grid.width();
                std::int64_t bin = static_cast<std::int64_t>(std::floor(pos));
                if (bin < 0 || bin >= grid.n_bins) {
                    ++tally.clamped;
                    bin = std::clamp<std::int64_t>(bin, 0, grid.n_bins - 1);
                }
                ++tally.counts[k * n_bins + static_cast<std::size_t>(bin)];
            }
        }
    });

    // Integer counts merged in worker order: independent of scheduling.
    std::vector<std::int64_t> counts(phases * n_bins, 0);
    std::int64_t drops = 0, clamped = 0;
    for (const Tally& t : tallies) {
        if (t.counts.empty()) continue;
        for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += t.counts[j];
        drops += t.drops;
        clamped += t.clamped;
    }
    if (static_cast<double>(drops) > options.max_drop_fraction * static_cast<double>(options.n_paths)) {
        std::ostringstream msg;
        msg << "mc_periodic_measure: " << drops << " of " << options.n_paths
            << " paths dropped (blowup or no pullback convergence)";
        throw QualityError(msg.str());
    }
    const std::int64_t kept = options.n_paths - drops;

    PeriodicMeasure pm;
    pm.period = period;
    pm.tau = options.tau;
    pm.sigma = system.sigma;
    pm.method = Method::Mc;
    pm.seed = options.seed;
    pm.n_paths = options.n_paths;
    pm.drops = drops;
    pm.clamped = clamped;
    for (std::size_t k = 0; k < phases; ++k) {
        std::vector<double> masses(n_bins);
        for (std::size_t b = 0; b < n_bins; ++b) {
            masses[b] = static_cast<double>(counts[k * n_bins + b]) / static_cast<double>(kept);
        }
        pm.phase_times.push_back(static_cast<double>(k_tau + static_cast<std::int64_t>(k) * per_phase) * dt);
        pm.densities.emplace_back(grid, std::move(masses));
    }
    return pm;
}

// ---- ergodic averages -------------------------------------------------------

namespace {

double orbit_frequency(const rds::SdeSystem& system, noise::WienerGrid& path,
                       const pullback::RandomPointSample& sample, const Range& b, double step, int n) {
    if (!sample.converged) throw ConfigError("orbit frequency: sample has not converged");
    if (n < 100) throw ConfigError("orbit frequency: N must be >= 100");
    const std::int64_t k_tau = path.index_of(sample.tau);
    const std::int64_t stride = path.index_of(step);
    if (stride <= 0) throw ConfigError("orbit frequency: step must be positive");
    const std::int64_t k_end = k_tau + stride * n;
    if (k_end > path.k_max()) path = noise::extend_forward(path, static_cast<double>(k_end) * path.dt());
    if (k_tau < path.k_min()) throw InsufficientHistoryError("orbit frequency: path starts after tau");
    double x = sample.value;
    int hits = 0;
    for (int i = 1; i <= n; ++i) {
        x = rds::evolve_steps(system, path, k_tau + stride * (i - 1), stride, x);
        if (b.contains(x)) ++hits;
    }
    return static_cast<double>(hits) / n;
}

}  // namespace

double birkhoff_frequency(const rds::SdeSystem& system, noise::WienerGrid& path,
                          const pullback::RandomPointSample& sample, const Range& b, int n) {
    return orbit_frequency(system, path, sample, b, system.drift.period(), n);
}

DensityGrid average_measure(const PeriodicMeasure& pm) {
    if (pm.phases() < 8) throw ConfigError("average_measure: needs K >= 8 phases");
    const GridSpec& g = pm.grid();
    std::vector<double> masses(static_cast<std::size_t>(g.n_bins), 0.0);
    for (const auto& d : pm.densities) {
        if (!(d.grid() == g)) throw GridMismatchError("average_measure: phases use different grids");
        for (std::size_t i = 0; i < masses.size(); ++i) masses[i] += d.masses()[i];
    }
    const double k = static_cast<double>(pm.phases());
    for (double& m : masses) m /= k;
    return {g, std::move(masses)};
}

double incommensurate_step(double period, double dt) {
    const double golden = 0.5 * (1.0 + std::sqrt(5.0));
    return std::nearbyint(period * golden / dt) * dt;
}

double incommensurate_frequency(const rds::SdeSystem& system, noise::WienerGrid& path,
                                const pullback::RandomPointSample& sample, const Range& b,
                                double t_prime, int n) {
    return orbit_frequency(system, path, sample, b, t_prime, n);
}

}  // namespace srlab::measure
