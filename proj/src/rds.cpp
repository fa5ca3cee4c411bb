#include "srlab/rds.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "srlab/errors.hpp"

namespace srlab::rds {

namespace {

[[noreturn]] void blowup(double t, double x) {
    std::ostringstream msg;
    msg << "state " << x << " at t = " << t << " left |x| <= " << kBlowupBound
        << "; the step size is too large for this excursion";
    throw NumericalBlowupError(msg.str(), t, x);
}

// Shared EM loop. Noise index and drift-time index advance together but may be
// offset from each other (absolute form: equal; cocycle form: noise from 0).
template <typename Observer>
double em_kernel(const SdeSystem& system, const noise::WienerGrid& path, std::int64_t k_noise,
                 std::int64_t k_time, std::int64_t n, double x, Observer&& observe) {
    if (n < 0) throw ConfigError("evolve: negative duration");
    if (!path.covers(k_noise, k_noise + n)) {
        std::ostringstream msg;
        msg << "path [" << path.k_min() << ", " << path.k_max() << ") does not cover steps ["
            << k_noise << ", " << k_noise + n << ")";
        throw InsufficientHistoryError(msg.str());
    }
    const double dt = path.dt();
    const double sigma = system.sigma;
    const auto increments = path.increments();
    const std::size_t first = static_cast<std::size_t>(k_noise - path.k_min());
    for (std::int64_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(k_time + j) * dt;
        x += system.drift(t, x) * dt + sigma * increments[first + static_cast<std::size_t>(j)];
        if (!(std::abs(x) <= kBlowupBound)) blowup(t + dt, x);
        observe(j + 1, x);
    }
    return x;
}

struct NoObserver {
    void operator()(std::int64_t, double) const noexcept {}
};

}  // namespace

void DuffingDrift::validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(nu > 0.0) || !(amplitude >= 0.0) ||
        !std::isfinite(alpha + beta + nu + amplitude)) {
        throw ConfigError("DuffingDrift needs alpha > 0, beta > 0, nu > 0, amplitude >= 0");
    }
}

Drift Drift::duffing(const DuffingDrift& params) {
    params.validate();
    Drift d;
    d.duffing_ = params;
    d.period_ = params.period();
    return d;
}

Drift Drift::linear(double rate, double period) {
    return custom([rate](double, double x) { return -rate * x; },
                  [rate](double, double) { return -rate; }, period);
}

Drift Drift::custom(Fn value, Fn slope, double period) {
    if (!value || !slope) throw ConfigError("Drift::custom: value and slope are required");
    if (!(period > 0.0) || !std::isfinite(period)) throw ConfigError("Drift: period must be positive");
    Drift d;
    d.value_ = std::move(value);
    d.slope_ = std::move(slope);
    d.period_ = period;
    return d;
}

double drift_eval(const DuffingDrift& drift, double t, double x) noexcept { return drift(t, x); }

void SdeSystem::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("SdeSystem: sigma must be >= 0");
}

StepGrid aligned_step(double period, double nominal_dt, std::int64_t multiple) {
    if (!(period > 0.0) || !(nominal_dt > 0.0) || multiple < 1) {
        throw ConfigError("aligned_step: period, dt and multiple must be positive");
    }
    const double blocks = std::max(1.0, std::nearbyint(period / nominal_dt / static_cast<double>(multiple)));
    const auto steps = static_cast<std::int64_t>(blocks) * multiple;
    return {period / static_cast<double>(steps), steps};
}

double evolve_steps(const SdeSystem& system, const noise::WienerGrid& path, std::int64_t k0,
                    std::int64_t n, double x0) {
    return em_kernel(system, path, k0, k0, n, x0, NoObserver{});
}

double evolve(const SdeSystem& system, const noise::WienerGrid& path, double tau, double t,
              double x0) {
    if (t < 0.0) throw ConfigError("evolve: t must be >= 0");
    return evolve_steps(system, path, path.index_of(tau), path.index_of(t), x0);
}

std::vector<double> trajectory(const SdeSystem& system, const noise::WienerGrid& path,
                               double tau, double t, double x0, std::int64_t record_every) {
    if (record_every < 1) throw ConfigError("trajectory: record_every must be >= 1");
    const std::int64_t k0 = path.index_of(tau);
    const std::int64_t n = path.index_of(t);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n / record_every + 1));
    out.push_back(x0);
    em_kernel(system, path, k0, k0, n, x0, [&](std::int64_t j, double x) {
        if (j % record_every == 0) out.push_back(x);
    });
    return out;
}

double cocycle(const SdeSystem& system, const noise::WienerGrid& omega, double tau, double t,
               double x) {
    if (t < 0.0) throw ConfigError("cocycle: t must be >= 0");
    return em_kernel(system, omega, 0, omega.index_of(tau), omega.index_of(t), x, NoObserver{});
}

namespace {

template <typename Observer>
double rode_kernel(const SdeSystem& system, const noise::WienerGrid& path, double tau, double t,
                   double z, const noise::OUSample& ou, Observer&& observe) {
    if (t < 0.0) throw ConfigError("rode_evolve: t must be >= 0");
    if (std::abs(ou.dt - path.dt()) > 1e-15 * path.dt()) {
        throw GridMismatchError("rode_evolve: OU sample lives on a different grid");
    }
    const std::int64_t k0 = path.index_of(tau);
    const std::int64_t n = path.index_of(t);
    if (k0 < ou.k_start || k0 + n >= ou.k_end()) {
        throw InsufficientHistoryError("rode_evolve: OU sample does not cover [tau, tau + t]");
    }
    const double dt = path.dt();
    for (std::int64_t j = 0; j < n; ++j) {
        const double time = static_cast<double>(k0 + j) * dt;
        const double o = ou.values[static_cast<std::size_t>(k0 + j - ou.k_start)];
        z += (system.drift(time, z + o) + o) * dt;
        if (!(std::abs(z) <= kBlowupBound)) blowup(time + dt, z);
        observe(j + 1, z);
    }
    return z;
}

}  // namespace

double rode_evolve(const SdeSystem& system, const noise::WienerGrid& path, double tau, double t,
                   double z0, const noise::OUSample& ou) {
    return rode_kernel(system, path, tau, t, z0, ou, NoObserver{});
}

std::vector<double> rode_trajectory(const SdeSystem& system, const noise::WienerGrid& path,
                                    double tau, double t, double z0, const noise::OUSample& ou) {
    std::vector<double> out{z0};
    rode_kernel(system, path, tau, t, z0, ou, [&](std::int64_t, double z) { out.push_back(z); });
    return out;
}

double rk4_reference(const Drift& drift, double t0, double t, double x0, double h) {
    if (!(h > 0.0) || t < 0.0) throw ConfigError("rk4_reference: need h > 0 and t >= 0");
    const auto n = static_cast<std::int64_t>(std::ceil(t / h - 1e-12));
    if (n == 0) return x0;
    const double step = t / static_cast<double>(n);
    double x = x0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double s = t0 + static_cast<double>(i) * step;
        const double k1 = drift(s, x);
        const double k2 = drift(s + 0.5 * step, x + 0.5 * step * k1);
        const double k3 = drift(s + 0.5 * step, x + 0.5 * step * k2);
        const double k4 = drift(s + step, x + step * k3);
        x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

DissipativityConstants dissipativity_constants(const DuffingDrift& drift, std::optional<double> l2) {
    drift.validate();
    const double c2 = l2.value_or(drift.alpha);
    if (!(c2 > 0.0)) throw ConfigError("dissipativity_constants: L2 must be positive");
    // (x1-x2)(f1-f2) = (alpha - beta q) d^2 with q = x1^2 + x1 x2 + x2^2 >= d^2/4;
    // maximising (alpha + L2) u - beta u^2 / 4 over u = d^2 gives (alpha + L2)^2 / beta.
    const double a = drift.alpha + c2;
    return {a * a / drift.beta, c2};
}

double dissipativity_lhs(const DuffingDrift& drift, double t, double x1, double x2, double l2) noexcept {
    const double d = x1 - x2;
    return d * (drift(t, x1) - drift(t, x2)) + l2 * d * d;
}

double em_monotone_dt_bound(const DuffingDrift& drift, double radius) noexcept {
    const double stiffness = 3.0 * drift.beta * radius * radius - drift.alpha;
    return stiffness > 0.0 ? 1.0 / stiffness : std::numeric_limits<double>::infinity();
}

double em_monotone_radius(const DuffingDrift& drift, double dt) noexcept {
    return std::sqrt((1.0 / dt + drift.alpha) / (3.0 * drift.beta));
}

bool order_preservation_check(const SdeSystem& system, const noise::WienerGrid& path, double tau,
                              double t, double x, double y) {
    if (x == y) return true;
    return evolve(system, path, tau, t, x) <= evolve(system, path, tau, t, y);
}

// ---- discrete fixture -----------------------------------------------------

void DiscretePeriodicRDS::validate() const {
    if (!(p0 >= 0.0) || !(p1 >= 0.0) || std::abs(p0 + p1 - 1.0) > 1e-12) {
        throw ConfigError("DiscretePeriodicRDS: probabilities must be nonnegative and sum to 1");
    }
    for (const auto& row : maps) {
        for (const auto& h : row) {
            if (!h.strictly_monotone() || !std::isfinite(h.offset)) {
                throw ConfigError("DiscretePeriodicRDS: every map must be a homeomorphism");
            }
        }
    }
}

const AffineMap& DiscretePeriodicRDS::map(std::int64_t time, int symbol) const noexcept {
    const auto parity = static_cast<std::size_t>(((time % 2) + 2) % 2);
    return maps[parity][static_cast<std::size_t>(symbol)];
}

DiscretePeriodicRDS DiscretePeriodicRDS::standard() {
    DiscretePeriodicRDS rds;
    rds.maps = {{{AffineMap{0.5, 1.0}, AffineMap{0.75, -0.5}},
                 {AffineMap{1.25, 0.25}, AffineMap{0.625, -1.0}}}};
    rds.p0 = 0.4;
    rds.p1 = 0.6;
    return rds;
}

int SymbolSequence::operator[](std::int64_t i) const noexcept {
    return noise::uniform01(seed_, i + offset_) < p1_ ? 1 : 0;
}

SymbolSequence SymbolSequence::shifted(std::int64_t k) const noexcept {
    SymbolSequence out = *this;
    out.offset_ += k;
    return out;
}

double discrete_step(const DiscretePeriodicRDS& rds, std::int64_t n, std::int64_t m,
                     const SymbolSequence& omega, double x) {
    if (n < 0) throw ConfigError("discrete_step: n must be >= 0");
    for (std::int64_t j = 0; j < n; ++j) x = rds.map(m + j, omega[j])(x);
    return x;
}

std::vector<double> discrete_orbit(const DiscretePeriodicRDS& rds, std::int64_t n, std::int64_t m,
                                   const SymbolSequence& omega, double x) {
    if (n < 0) throw ConfigError("discrete_orbit: n must be >= 0");
    std::vector<double> orbit{x};
    orbit.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t j = 0; j < n; ++j) {
        x = rds.map(m + j, omega[j])(x);
        orbit.push_back(x);
    }
    return orbit;
}

}  // namespace srlab::rds
