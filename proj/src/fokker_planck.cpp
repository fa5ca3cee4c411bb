#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "srlab/errors.hpp"
#include "srlab/measure.hpp"

namespace srlab::measure {

namespace {

// Bernoulli function z / (e^z - 1).
inline double bernoulli(double z) noexcept {
    if (std::abs(z) < 1e-10) return 1.0 - 0.5 * z;
    return z / std::expm1(z);
}

}  // namespace

double required_half_width(const rds::SdeSystem& system) {
    double well = 1.0;
    if (const auto& d = system.drift.duffing_params()) well = std::max(1.0, std::sqrt(d->alpha / d->beta));
    return 2.0 * well + 5.0 * system.sigma;
}

FokkerPlanckSolver::FokkerPlanckSolver(const rds::SdeSystem& system, GridSpec grid, double dt, double t0)
    : system_(system), grid_(grid), dt_(dt), step_index_(0), diffusion_(0.5 * system.sigma * system.sigma) {
    grid_.validate();
    if (!(system.sigma > 0.0)) throw ConfigError("FokkerPlanckSolver: sigma must be positive");
    if (!(dt > 0.0)) throw ConfigError("FokkerPlanckSolver: dt must be positive");
    step_index_ = noise::aligned_index(t0, dt);
    const auto n = static_cast<std::size_t>(grid_.n_bins);
    masses_.assign(n, 1.0 / static_cast<double>(n));
    face_x_.resize(n > 0 ? n - 1 : 0);
    for (std::size_t f = 0; f < face_x_.size(); ++f) face_x_[f] = grid_.lower(static_cast<int>(f) + 1);
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    scratch_.resize(n);
}

void FokkerPlanckSolver::set_masses(std::vector<double> masses) {
    if (masses.size() != masses_.size()) throw GridMismatchError("FokkerPlanckSolver: wrong mass count");
    masses_ = std::move(masses);
}

void FokkerPlanckSolver::step() {
    const std::size_t n = masses_.size();
    const double h = grid_.width();
    const double t_next = static_cast<double>(step_index_ + 1) * dt_;
    const double scale = dt_ * diffusion_ / (h * h);
    const auto& duffing = system_.drift.duffing_params();
    const double forcing = duffing ? duffing->amplitude * std::cos(duffing->nu * t_next) : 0.0;

    std::fill(diag_.begin(), diag_.end(), 1.0);
    std::fill(lower_.begin(), lower_.end(), 0.0);
    std::fill(upper_.begin(), upper_.end(), 0.0);
    for (std::size_t f = 0; f + 1 < n; ++f) {
        const double x = face_x_[f];
        const double velocity = duffing ? duffing->alpha * x - duffing->beta * x * x * x + forcing
                                        : system_.drift(t_next, x);
        const double peclet = velocity * h / diffusion_;
        const double b_plus = bernoulli(peclet);
        const double b_minus = b_plus + peclet;  // B(-z) = B(z) + z
        // flux through face f (from cell f to f+1): (D/h)(B(-Pe) rho_f - B(Pe) rho_{f+1})
        const double out_left = scale * b_minus;
        const double out_right = scale * b_plus;
        diag_[f] += out_left;
        upper_[f] = -out_right;
        diag_[f + 1] += out_right;
        lower_[f + 1] = -out_left;
    }

    // Thomas algorithm; the matrix is a column diagonally dominant M-matrix.
    scratch_[0] = upper_[0] / diag_[0];
    masses_[0] /= diag_[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double denom = diag_[i] - lower_[i] * scratch_[i - 1];
        scratch_[i] = upper_[i] / denom;
        masses_[i] = (masses_[i] - lower_[i] * masses_[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) masses_[i] -= scratch_[i] * masses_[i + 1];
    ++step_index_;
}

void FokkerPlanckSolver::advance(std::int64_t steps) {
    for (std::int64_t i = 0; i < steps; ++i) step();
}

PeriodicMeasure fp_periodic_measure(const rds::SdeSystem& system, const FpOptions& options) {
    system.validate();
    options.grid.validate();
    if (!(system.sigma > 0.0)) throw ConfigError("fp_periodic_measure: sigma must be positive");
    if (options.phases < 2) throw ConfigError("fp_periodic_measure: need K >= 2 phases");
    if (options.max_periods < 1) throw ConfigError("fp_periodic_measure: max_periods must be >= 1");
    if (!(options.tol > 0.0)) throw ConfigError("fp_periodic_measure: tol must be positive");
    const double half = required_half_width(system);
    if (options.grid.x_min > -half || options.grid.x_max < half) {
        std::ostringstream msg;
        msg << "fp_periodic_measure: grid [" << options.grid.x_min << ", " << options.grid.x_max
            << "] must cover [-" << half << ", " << half << "]";
        throw ConfigError(msg.str());
    }

    const double period = system.drift.period();
    const rds::StepGrid steps =
        rds::aligned_step(period, options.dt, std::lcm<std::int64_t>(64, options.phases));
    const std::int64_t per_phase = steps.steps_per_period / options.phases;
    FokkerPlanckSolver solver(system, options.grid, steps.dt, noise::aligned_index(options.tau, steps.dt) * steps.dt);

    const auto phases = static_cast<std::size_t>(options.phases);
    std::vector<std::vector<double>> previous, current(phases);
    double distance = std::numeric_limits<double>::infinity();
    for (int p = 1; p <= options.max_periods; ++p) {
        for (std::size_t k = 0; k < phases; ++k) {
            current[k] = solver.masses();
            solver.advance(per_phase);
        }
        if (!previous.empty()) {
            distance = 0.0;
            for (std::size_t k = 0; k < phases; ++k) {
                double d = 0.0;
                for (std::size_t i = 0; i < current[k].size(); ++i) d += std::abs(current[k][i] - previous[k][i]);
                distance = std::max(distance, d);
            }
            if (distance < options.tol) {
                PeriodicMeasure pm;
                pm.period = period;
                pm.tau = options.tau;
                pm.sigma = system.sigma;
                pm.method = Method::Pde;
                pm.tol = options.tol;
                pm.periods_run = p;
                pm.cycle_distance = distance;
                for (std::size_t k = 0; k < phases; ++k) {
                    pm.phase_times.push_back(options.tau + static_cast<double>(k * per_phase) * steps.dt);
                    pm.densities.emplace_back(options.grid, std::move(current[k]));
                }
                return pm;
            }
        }
        previous = current;
    }
    std::ostringstream msg;
    msg << "fp_periodic_measure: no periodic cycle within " << options.max_periods
        << " periods (last cycle distance " << distance << ")";
    throw ConvergenceError(msg.str(), distance);
}

}  // namespace srlab::measure
