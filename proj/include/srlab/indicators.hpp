#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "srlab/measure.hpp"
#include "srlab/rds.hpp"

namespace srlab::indicators {

/// One row of a resonance sweep.
struct IndicatorRecord {
    double sigma = 0.0;
    double p_minus = 0.0;
    double p_plus = 0.0;
    double p = 0.0;
    double x_bar = 0.0;
    measure::Method method = measure::Method::Pde;
    // n_paths for MC, cycle tolerance for PDE
    double n_paths_or_tol = 0.0;
    std::int64_t drops = 0;
    bool ok = true;
    std::string error;  // set when the measure could not be computed
};

struct PhaseMean {
    double phase_time = 0.0;
    double mean = 0.0;
};

// First moments int x d rho_{t_k}(x), one per phase.
std::vector<PhaseMean> mean_trajectory(const measure::PeriodicMeasure& pm);

// max_k |x_bar(t_k)|.
double x_bar_amplitude(const measure::PeriodicMeasure& pm);

struct TransportProbabilities {
    double p_minus = 0.0;
    double p_plus = 0.0;
};

// p- = (max m- - min m-) / max m- with m-_k = rho_{t_k}((-inf, 0]); p+ uses
// [0, inf). The cell containing 0 is split in proportion to its overlap.
// Throws DegenerateMeasureError when a half line carries no mass at any phase.
TransportProbabilities transport_probabilities(const measure::PeriodicMeasure& pm);
TransportProbabilities transport_probabilities(const std::vector<double>& left_masses,
                                               const std::vector<double>& right_masses);

IndicatorRecord resonance_indicator(const measure::PeriodicMeasure& pm);

struct SweepConfig {
    measure::Method method = measure::Method::Pde;
    measure::McOptions mc;
    measure::FpOptions fp;
    unsigned workers = 0;  // parallel over sigma entries; 0: hardware concurrency
};

// One record per sigma. MC runs reuse the master seed mc.seed for every sigma
// (common random numbers). A failing entry is kept with ok = false.
std::vector<IndicatorRecord> sigma_sweep(const rds::Drift& drift, const std::vector<double>& sigmas,
                                         const SweepConfig& config);

// Index of the largest value; ties resolve to the first.
std::size_t argmax(const std::vector<double>& values);

// True if values rise to their maximum and fall after it, with at most
// `tolerance` local violations on either side.
bool unimodal(const std::vector<double>& values, int tolerance = 1);

}  // namespace srlab::indicators
