#include "srlab/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "srlab/errors.hpp"

namespace srlab::pullback {

namespace {

void ensure_history(noise::WienerGrid& path, std::int64_t k_begin) {
    if (k_begin < path.k_min()) {
        path = noise::extend_backward(path, static_cast<double>(k_begin) * path.dt());
    }
}

void ensure_future(noise::WienerGrid& path, std::int64_t k_end) {
    if (k_end > path.k_max()) {
        path = noise::extend_forward(path, static_cast<double>(k_end) * path.dt());
    }
}

void check_monotone_step(const rds::SdeSystem& system, double dt, const Interval& interval) {
    const auto& duffing = system.drift.duffing_params();
    if (!duffing) return;
    const double radius = std::max(std::abs(interval.lo), std::abs(interval.hi));
    const double bound = rds::em_monotone_dt_bound(*duffing, radius);
    if (dt > bound) {
        std::ostringstream msg;
        msg << "dt = " << dt << " exceeds the order-preservation bound " << bound
            << " for initial interval [" << interval.lo << ", " << interval.hi << "]";
        throw ConfigError(msg.str());
    }
}

}  // namespace

std::vector<double> doubling_schedule(double period, int count) {
    if (count < 1 || !(period > 0.0)) throw ConfigError("doubling_schedule: need count >= 1, period > 0");
    std::vector<double> out;
    double s = period;
    for (int i = 0; i < count; ++i, s *= 2.0) out.push_back(s);
    return out;
}

void PullbackConfig::validate() const {
    if (!(init.lo < init.hi)) throw ConfigError("PullbackConfig: init interval needs lo < hi");
    if (!(tol > 0.0)) throw ConfigError("PullbackConfig: tol must be positive");
    if (schedule.empty()) throw ConfigError("PullbackConfig: schedule is empty");
    if (!(schedule.front() >= 0.0)) throw ConfigError("PullbackConfig: schedule must be >= 0");
    for (std::size_t i = 1; i < schedule.size(); ++i) {
        if (!(schedule[i] > schedule[i - 1])) {
            throw ConfigError("PullbackConfig: schedule must be strictly increasing");
        }
    }
}

Interval pullback_image(const rds::SdeSystem& system, noise::WienerGrid& path, double tau,
                        double s, Interval interval) {
    if (!(interval.lo <= interval.hi)) throw ConfigError("pullback_image: empty interval");
    if (s < 0.0) throw ConfigError("pullback_image: s must be >= 0");
    check_monotone_step(system, path.dt(), interval);
    const std::int64_t k_tau = path.index_of(tau);
    const std::int64_t n = path.index_of(s);
    ensure_history(path, k_tau - n);
    ensure_future(path, k_tau);
    return {rds::evolve_steps(system, path, k_tau - n, n, interval.lo),
            rds::evolve_steps(system, path, k_tau - n, n, interval.hi)};
}

RandomPointSample random_point(const rds::SdeSystem& system, noise::WienerGrid& path, double tau,
                               const PullbackConfig& config) {
    config.validate();
    RandomPointSample sample;
    sample.tau = tau;
    sample.seed = path.seed();
    for (const double s : config.schedule) {
        const Interval image = pullback_image(system, path, tau, s, config.init);
        sample.history.push_back({s, image});
        sample.image = image;
        sample.pullback_time = s;
        sample.converged = image.diameter() <= config.tol;
        if (sample.converged && config.stop_at_tol) break;
    }
    sample.value = sample.image.midpoint();
    sample.diameter = sample.image.diameter();
    return sample;
}

InvarianceResidual verify_invariance(const rds::SdeSystem& system, noise::WienerGrid& path,
                                     const RandomPointSample& sample, double t,
                                     const PullbackConfig& config) {
    if (!sample.converged) throw ConfigError("verify_invariance: sample has not converged");
    const std::int64_t k_tau = path.index_of(sample.tau);
    const std::int64_t n = path.index_of(t);
    ensure_future(path, k_tau + n);
    InvarianceResidual out;
    out.forward = rds::evolve_steps(system, path, k_tau, n, sample.value);
    const RandomPointSample later = random_point(system, path, sample.tau + t, config);
    out.pulled_back = later.value;
    out.converged = later.converged;
    out.residual = std::abs(out.forward - out.pulled_back);
    return out;
}

namespace {

InvarianceResidual period_check(const rds::SdeSystem& system, noise::WienerGrid& path, double tau,
                                const PullbackConfig& config, bool shifted) {
    const double period = system.drift.period();
    const RandomPointSample here = random_point(system, path, tau, config);
    const std::int64_t k_tau = path.index_of(tau);
    const std::int64_t n = path.index_of(period);
    ensure_future(path, k_tau + n);

    InvarianceResidual out;
    out.forward = rds::evolve_steps(system, path, k_tau, n, here.value);
    RandomPointSample there;
    if (shifted) {
        noise::WienerGrid moved = noise::shift(path, period);
        there = random_point(system, moved, tau, config);
    } else {
        there = here;
    }
    out.pulled_back = there.value;
    out.converged = here.converged && there.converged;
    out.residual = std::abs(out.forward - out.pulled_back);
    return out;
}

}  // namespace

InvarianceResidual verify_periodicity(const rds::SdeSystem& system, noise::WienerGrid& path,
                                      double tau, const PullbackConfig& config) {
    return period_check(system, path, tau, config, true);
}

InvarianceResidual periodicity_mismatch(const rds::SdeSystem& system, noise::WienerGrid& path,
                                        double tau, const PullbackConfig& config) {
    return period_check(system, path, tau, config, false);
}

AbsorbingRadius absorbing_radius(const rds::SdeSystem& system, noise::WienerGrid& path, double tau,
                                 double history, std::optional<double> l3) {
    const auto& duffing = system.drift.duffing_params();
    if (!duffing) throw ConfigError("absorbing_radius: needs a Duffing drift");
    if (!(history > 0.0)) throw ConfigError("absorbing_radius: history must be positive");
    const rds::DissipativityConstants dc = rds::dissipativity_constants(*duffing);
    const double c3_split = l3.value_or(0.5 * dc.l2);
    if (!(c3_split > 0.0) || !(c3_split < dc.l2)) {
        throw ConfigError("absorbing_radius: L3 must lie in (0, L2)");
    }

    AbsorbingRadius out;
    out.c1 = dc.l2 - c3_split;
    out.c2 = 2.0 * dc.l1;
    out.c3 = 1.0 / c3_split;

    const double dt = path.dt();
    const std::int64_t k_tau = path.index_of(tau);
    const auto n = static_cast<std::int64_t>(std::ceil(history / dt - 1e-9));
    const auto burn = static_cast<std::int64_t>(std::ceil(noise::kDefaultOuBurnIn / dt - 1e-9));
    ensure_history(path, k_tau - n - burn);
    ensure_future(path, k_tau);
    const noise::OUSample ou =
        noise::ou_process(path, system.sigma, noise::kDefaultOuBurnIn, static_cast<double>(k_tau - n) * dt);

    double integral = 0.0;
    for (std::int64_t j = 0; j <= n; ++j) {
        const std::int64_t k = k_tau - n + j;
        const double r = static_cast<double>(k) * dt;
        const double o = ou.at(k);
        const double g = system.drift(r, o) + o;
        const double weight = (j == 0 || j == n) ? 0.5 : 1.0;
        integral += weight * std::exp(-out.c1 * static_cast<double>(k_tau - k) * dt) * (out.c2 + out.c3 * g * g);
    }
    out.radius = 2.0 + integral * dt;
    out.ou_at_tau = ou.at(k_tau);
    return out;
}

}  // namespace srlab::pullback
