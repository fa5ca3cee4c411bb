#include "srlab/noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "srlab/errors.hpp"

namespace srlab::noise {

namespace {

using Block = PhiloxBlock;

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

}  // namespace

// Philox4x32-10 (Salmon et al., SC'11).
PhiloxBlock philox4x32_10(PhiloxBlock ctr, std::uint64_t seed) noexcept {
    std::uint32_t k0 = static_cast<std::uint32_t>(seed);
    std::uint32_t k1 = static_cast<std::uint32_t>(seed >> 32);
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return ctr;
}

namespace {

Block draw(std::uint64_t seed, std::int64_t counter, std::uint32_t stream) noexcept {
    const auto c = static_cast<std::uint64_t>(counter);
    return philox4x32_10({static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32), stream, 0u}, seed);
}

// 53-bit uniform in [0, 1).
inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
    const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
    return static_cast<double>(bits) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

double standard_normal(std::uint64_t seed, std::int64_t counter) noexcept {
    const Block b = draw(seed, counter, 0u);
    const double u1 = 1.0 - to_unit(b[0], b[1]);  // (0, 1]
    const double u2 = to_unit(b[2], b[3]);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double uniform01(std::uint64_t seed, std::int64_t counter) noexcept {
    const Block b = draw(seed, counter, 1u);
    return to_unit(b[0], b[1]);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

std::int64_t aligned_index(double t, double dt) {
    if (!(dt > 0.0) || !std::isfinite(t)) {
        throw ConfigError("time grid needs dt > 0 and a finite time");
    }
    const double ratio = t / dt;
    const double k = std::nearbyint(ratio);
    if (std::abs(ratio - k) > 1e-6) {
        std::ostringstream msg;
        msg << "time " << t << " is not a multiple of dt = " << dt;
        throw GridAlignmentError(msg.str());
    }
    return static_cast<std::int64_t>(k);
}

WienerGrid::WienerGrid(std::uint64_t seed, double dt, std::int64_t k_min, std::int64_t k_max)
    : seed_(seed), dt_(dt), k_min_(k_min), k_max_(k_max) {
    if (!(dt > 0.0)) throw ConfigError("WienerGrid: dt must be positive");
    if (k_max < k_min) throw ConfigError("WienerGrid: k_max < k_min");
    increments_.resize(static_cast<std::size_t>(k_max - k_min));
    fill(k_min, k_max, increments_);
}

void WienerGrid::fill(std::int64_t k_begin, std::int64_t k_end, std::span<double> out) const noexcept {
    const double scale = std::sqrt(dt_ / substeps_);
    for (std::int64_t k = k_begin; k < k_end; ++k) {
        const std::int64_t first = (k + counter_offset_) * substeps_;
        double sum = 0.0;
        for (int j = 0; j < substeps_; ++j) sum += standard_normal(seed_, first + j);
        out[static_cast<std::size_t>(k - k_begin)] = scale * sum;
    }
}

double WienerGrid::increment(std::int64_t k) const {
    if (k < k_min_ || k >= k_max_) {
        std::ostringstream msg;
        msg << "increment " << k << " outside path [" << k_min_ << ", " << k_max_ << ")";
        throw InsufficientHistoryError(msg.str());
    }
    return increments_[static_cast<std::size_t>(k - k_min_)];
}

double WienerGrid::generated_increment(std::int64_t k) const noexcept {
    if (k >= k_min_ && k < k_max_) return increments_[static_cast<std::size_t>(k - k_min_)];
    double value = 0.0;
    fill(k, k + 1, std::span<double>(&value, 1));
    return value;
}

double WienerGrid::value_at(std::int64_t k) const noexcept {
    double w = 0.0;
    if (k >= base_index_) {
        for (std::int64_t j = base_index_; j < k; ++j) w += generated_increment(j);
    } else {
        for (std::int64_t j = k; j < base_index_; ++j) w -= generated_increment(j);
    }
    return w;
}

WienerGrid new_path(std::uint64_t seed, double dt, double t_min, double t_max) {
    if (!(dt > 0.0)) throw ConfigError("new_path: dt must be positive");
    const std::int64_t k_min = aligned_index(t_min, dt);
    const std::int64_t k_max = aligned_index(t_max, dt);
    if (k_max < k_min) throw ConfigError("new_path: t_min must not exceed t_max");
    return WienerGrid(seed, dt, k_min, k_max);
}

WienerGrid extend_backward(const WienerGrid& path, double new_t_min) {
    const std::int64_t k_new = aligned_index(new_t_min, path.dt_);
    if (k_new > path.k_min_) {
        throw BadExtensionError("extend_backward: new t_min lies after the current start");
    }
    if (k_new == path.k_min_) return path;
    WienerGrid out = path;
    out.k_min_ = k_new;
    std::vector<double> prefix(static_cast<std::size_t>(path.k_min_ - k_new));
    path.fill(k_new, path.k_min_, prefix);
    out.increments_.insert(out.increments_.begin(), prefix.begin(), prefix.end());
    return out;
}

WienerGrid extend_forward(const WienerGrid& path, double new_t_max) {
    const std::int64_t k_new = aligned_index(new_t_max, path.dt_);
    if (k_new < path.k_max_) {
        throw BadExtensionError("extend_forward: new t_max lies before the current end");
    }
    if (k_new == path.k_max_) return path;
    WienerGrid out = path;
    out.k_max_ = k_new;
    const std::size_t old = out.increments_.size();
    out.increments_.resize(static_cast<std::size_t>(k_new - path.k_min_));
    path.fill(path.k_max_, k_new, std::span<double>(out.increments_).subspan(old));
    return out;
}

WienerGrid shift(const WienerGrid& path, double s) {
    const std::int64_t m = aligned_index(s, path.dt_);
    WienerGrid out = path;
    out.k_min_ -= m;
    out.k_max_ -= m;
    out.counter_offset_ += m;
    out.base_index_ = 0;
    return out;
}

WienerGrid coarsen(const WienerGrid& path, int factor) {
    if (factor < 1) throw ConfigError("coarsen: factor must be >= 1");
    if (factor == 1) return path;
    if (path.k_min_ % factor != 0 || path.k_max_ % factor != 0 ||
        path.counter_offset_ % factor != 0 || path.base_index_ % factor != 0) {
        throw GridAlignmentError("coarsen: path bounds are not multiples of the factor");
    }
    WienerGrid out;
    out.seed_ = path.seed_;
    out.dt_ = path.dt_ * factor;
    out.k_min_ = path.k_min_ / factor;
    out.k_max_ = path.k_max_ / factor;
    out.base_index_ = path.base_index_ / factor;
    out.counter_offset_ = path.counter_offset_ / factor;
    out.substeps_ = path.substeps_ * factor;
    // Regenerated rather than summed so later extensions of the coarse grid
    // stay bit-identical with its stored increments.
    out.increments_.resize(static_cast<std::size_t>(out.k_max_ - out.k_min_));
    out.fill(out.k_min_, out.k_max_, out.increments_);
    return out;
}

double OUSample::at(std::int64_t k) const {
    if (k < k_start || k >= k_end()) {
        std::ostringstream msg;
        msg << "OU value at index " << k << " outside sample [" << k_start << ", " << k_end() << ")";
        throw InsufficientHistoryError(msg.str());
    }
    return values[static_cast<std::size_t>(k - k_start)];
}

namespace {

OUSample ou_from_index(const WienerGrid& path, double sigma, double burn_in, std::int64_t k_start) {
    if (!(burn_in >= 0.0)) throw ConfigError("ou_process: burn_in must be >= 0");
    if (!(sigma >= 0.0)) throw ConfigError("ou_process: sigma must be >= 0");
    const double dt = path.dt();
    const auto burn_steps = static_cast<std::int64_t>(std::ceil(burn_in / dt - 1e-9));
    const std::int64_t k_init = k_start - burn_steps;
    if (k_init < path.k_min() || k_start > path.k_max()) {
        throw InsufficientHistoryError("ou_process: path does not reach back over the burn-in window");
    }

    // Exact transition: O' = e^{-dt} O + sigma * sqrt((1 - e^{-2dt}) / 2) * N(0,1),
    // with the normal taken from the path increment so O shares omega with W.
    const double decay = std::exp(-dt);
    const double gain = sigma * std::sqrt(-std::expm1(-2.0 * dt) / (2.0 * dt));

    OUSample out;
    out.dt = dt;
    out.sigma = sigma;
    out.burn_in = static_cast<double>(burn_steps) * dt;
    out.k_start = k_start;
    out.values.resize(static_cast<std::size_t>(path.k_max() - k_start + 1));

    double o = 0.0;
    for (std::int64_t k = k_init; k < k_start; ++k) o = decay * o + gain * path.increment(k);
    out.values[0] = o;
    for (std::int64_t k = k_start; k < path.k_max(); ++k) {
        o = decay * o + gain * path.increment(k);
        out.values[static_cast<std::size_t>(k - k_start + 1)] = o;
    }
    return out;
}

}  // namespace

OUSample ou_process(const WienerGrid& path, double sigma, double burn_in, double t_start) {
    return ou_from_index(path, sigma, burn_in, path.index_of(t_start));
}

OUSample ou_process(const WienerGrid& path, double sigma, double burn_in) {
    if (!(burn_in >= 0.0)) throw ConfigError("ou_process: burn_in must be >= 0");
    const auto burn_steps = static_cast<std::int64_t>(std::ceil(burn_in / path.dt() - 1e-9));
    return ou_from_index(path, sigma, burn_in, path.k_min() + burn_steps);
}

}  // namespace srlab::noise
