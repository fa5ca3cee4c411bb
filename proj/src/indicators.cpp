#include "srlab/indicators.hpp"

#include <algorithm>
#include <cmath>

#include "srlab/errors.hpp"
#include "srlab/parallel.hpp"

namespace srlab::indicators {

std::vector<PhaseMean> mean_trajectory(const measure::PeriodicMeasure& pm) {
    std::vector<PhaseMean> out;
    out.reserve(pm.phases());
    for (std::size_t k = 0; k < pm.phases(); ++k) out.push_back({pm.phase_times[k], pm.densities[k].mean()});
    return out;
}

double x_bar_amplitude(const measure::PeriodicMeasure& pm) {
    if (pm.phases() < 2) throw ConfigError("x_bar_amplitude: needs K >= 2 phases");
    double amplitude = 0.0;
    for (const auto& d : pm.densities) amplitude = std::max(amplitude, std::abs(d.mean()));
    return amplitude;
}

namespace {

double normalized_range(const std::vector<double>& masses, const char* side) {
    const auto [lo, hi] = std::minmax_element(masses.begin(), masses.end());
    if (!(*hi > 0.0)) {
        throw DegenerateMeasureError(std::string("transport_probabilities: no mass on the ") + side +
                                     " half line at any phase");
    }
    return (*hi - *lo) / *hi;
}

}  // namespace

TransportProbabilities transport_probabilities(const std::vector<double>& left_masses,
                                               const std::vector<double>& right_masses) {
    if (left_masses.empty() || right_masses.empty()) {
        throw ConfigError("transport_probabilities: no phases");
    }
    return {normalized_range(left_masses, "left"), normalized_range(right_masses, "right")};
}

TransportProbabilities transport_probabilities(const measure::PeriodicMeasure& pm) {
    std::vector<double> left, right;
    for (const auto& d : pm.densities) {
        left.push_back(d.mass_in(measure::Range::at_most(0.0)));
        right.push_back(d.mass_in(measure::Range::at_least(0.0)));
    }
    return transport_probabilities(left, right);
}

IndicatorRecord resonance_indicator(const measure::PeriodicMeasure& pm) {
    const TransportProbabilities tp = transport_probabilities(pm);
    IndicatorRecord r;
    r.sigma = pm.sigma;
    r.p_minus = tp.p_minus;
    r.p_plus = tp.p_plus;
    r.p = tp.p_minus * tp.p_plus;
    r.x_bar = x_bar_amplitude(pm);
    r.method = pm.method;
    r.n_paths_or_tol = pm.method == measure::Method::Mc ? static_cast<double>(pm.n_paths) : pm.tol;
    r.drops = pm.drops;
    return r;
}

std::vector<IndicatorRecord> sigma_sweep(const rds::Drift& drift, const std::vector<double>& sigmas,
                                         const SweepConfig& config) {
    if (sigmas.empty()) throw ConfigError("sigma_sweep: sigma list is empty");
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > sigmas[i - 1])) throw ConfigError("sigma_sweep: sigma list must be ascending");
    }
    std::vector<IndicatorRecord> records(sigmas.size());
    const unsigned workers = resolve_workers(config.workers);
    parallel_chunks(sigmas.size(), workers, [&](unsigned, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const rds::SdeSystem system{drift, sigmas[i]};
            IndicatorRecord& r = records[i];
            try {
                measure::PeriodicMeasure pm;
                if (config.method == measure::Method::Mc) {
                    measure::McOptions mc = config.mc;
                    mc.workers = 1;  // parallelism is over sigma here
                    pm = measure::mc_periodic_measure(system, mc);
                } else {
                    pm = measure::fp_periodic_measure(system, config.fp);
                }
                r = resonance_indicator(pm);
            } catch (const Error& e) {
                r = IndicatorRecord{};
                r.ok = false;
                r.error = e.what();
                r.n_paths_or_tol = config.method == measure::Method::Mc
                                       ? static_cast<double>(config.mc.n_paths)
                                       : config.fp.tol;
            }
            r.sigma = sigmas[i];
            r.method = config.method;
        }
    });
    return records;
}

std::size_t argmax(const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("argmax: empty sequence");
    return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

bool unimodal(const std::vector<double>& values, int tolerance) {
    if (values.size() < 3) return true;
    const std::size_t peak = argmax(values);
    int rises_after = 0;
    int falls_before = 0;
    for (std::size_t i = 1; i <= peak; ++i) {
        if (values[i] < values[i - 1]) ++falls_before;
    }
    for (std::size_t i = peak + 1; i < values.size(); ++i) {
        if (values[i] > values[i - 1]) ++rises_after;
    }
    return falls_before <= tolerance && rises_after <= tolerance;
}

}  // namespace srlab::indicators
