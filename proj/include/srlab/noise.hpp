#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace srlab::noise {

using PhiloxBlock = std::array<std::uint32_t, 4>;
// The Philox4x32-10 bijection; key words are the low and high halves of `key`.
PhiloxBlock philox4x32_10(PhiloxBlock counter, std::uint64_t key) noexcept;

// Counter-based generator: a pure function of (seed, counter).
double standard_normal(std::uint64_t seed, std::int64_t counter) noexcept;
double uniform01(std::uint64_t seed, std::int64_t counter) noexcept;

// Independent child seed for stream `index` of a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

// Step index of time t on a grid of spacing dt; throws GridAlignmentError
// when t is not an integer multiple of dt.
std::int64_t aligned_index(double t, double dt);

/// A two-sided discretized Brownian path, the realization omega.
///
/// Increment k covers [k*dt, (k+1)*dt) and is drawn from N(0, dt). Its value is
/// fixed by (seed, k + counter_offset) alone, so a grid can be extended or
/// shifted without disturbing increments that already exist. A coarsened grid
/// sums `substeps` fine normals per increment, which keeps it consistent with
/// the finer path it came from.
class WienerGrid {
public:
    WienerGrid(std::uint64_t seed, double dt, std::int64_t k_min, std::int64_t k_max);

    std::uint64_t seed() const noexcept { return seed_; }
    double dt() const noexcept { return dt_; }
    std::int64_t k_min() const noexcept { return k_min_; }
    std::int64_t k_max() const noexcept { return k_max_; }
    std::int64_t base_index() const noexcept { return base_index_; }
    std::int64_t counter_offset() const noexcept { return counter_offset_; }
    int substeps() const noexcept { return substeps_; }
    double t_min() const noexcept { return static_cast<double>(k_min_) * dt_; }
    double t_max() const noexcept { return static_cast<double>(k_max_) * dt_; }

    std::span<const double> increments() const noexcept { return increments_; }
    std::size_t size() const noexcept { return increments_.size(); }

    bool covers(std::int64_t k_begin, std::int64_t k_end) const noexcept {
        return k_begin >= k_min_ && k_end <= k_max_;
    }

    // Stored increment at absolute index k; InsufficientHistoryError outside
    // [k_min, k_max).
    double increment(std::int64_t k) const;

    // Increment at any absolute index, regenerated when not stored.
    double generated_increment(std::int64_t k) const noexcept;

    // W(k*dt), pinned so that W(base_index*dt) = 0.
    double value_at(std::int64_t k) const noexcept;

    std::int64_t index_of(double t) const { return aligned_index(t, dt_); }

    friend bool operator==(const WienerGrid&, const WienerGrid&) = default;

private:
    friend WienerGrid extend_backward(const WienerGrid&, double);
    friend WienerGrid extend_forward(const WienerGrid&, double);
    friend WienerGrid shift(const WienerGrid&, double);
    friend WienerGrid coarsen(const WienerGrid&, int);

    WienerGrid() = default;
    void fill(std::int64_t k_begin, std::int64_t k_end, std::span<double> out) const noexcept;

    std::uint64_t seed_ = 0;
    double dt_ = 0.0;
    std::int64_t k_min_ = 0;
    std::int64_t k_max_ = 0;
    std::int64_t base_index_ = 0;
    std::int64_t counter_offset_ = 0;
    int substeps_ = 1;
    std::vector<double> increments_;
};

// Path covering [t_min, t_max]; both bounds must be multiples of dt.
WienerGrid new_path(std::uint64_t seed, double dt, double t_min, double t_max);

WienerGrid extend_backward(const WienerGrid& path, double new_t_min);
WienerGrid extend_forward(const WienerGrid& path, double new_t_max);

// Path of theta_s omega: W'(t) = W(t + s) - W(s).
WienerGrid shift(const WienerGrid& path, double s);

// Path with step factor*dt whose increments are sums of `factor` consecutive
// increments of the input.
WienerGrid coarsen(const WienerGrid& path, int factor);

/// Stationary Ornstein-Uhlenbeck process dy = -y dt + sigma dW built on a path.
struct OUSample {
    double dt = 0.0;
    double sigma = 0.0;
    double burn_in = 0.0;
    std::int64_t k_start = 0;  // index of values[0]
    std::vector<double> values;

    std::int64_t k_end() const noexcept {
        return k_start + static_cast<std::int64_t>(values.size());
    }
    // O at absolute grid index k; InsufficientHistoryError outside the sample.
    double at(std::int64_t k) const;
};

inline constexpr double kDefaultOuBurnIn = 20.0;

// O on [t_start, path.t_max()], started from O = 0 at t_start - burn_in and
// advanced with the exact AR(1) transition of the OU process. burn_in is
// rounded up to whole steps.
OUSample ou_process(const WienerGrid& path, double sigma, double burn_in, double t_start);
OUSample ou_process(const WienerGrid& path, double sigma, double burn_in = kDefaultOuBurnIn);

}  // namespace srlab::noise
