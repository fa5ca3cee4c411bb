#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "srlab/config.hpp"
#include "srlab/indicators.hpp"
#include "srlab/measure.hpp"
#include "srlab/pullback.hpp"

namespace srlab::report {

// Every CSV opens with the effective config, one `# key = value` line each.
void write_config_header(std::ostream& out, const config::RunConfig& cfg);

struct SeriesPoint {
    double t = 0.0;
    double x = 0.0;
    double forcing = 0.0;
};

void write_series(std::ostream& out, const config::RunConfig& cfg, const std::vector<SeriesPoint>& rows);

// JSON object with the measure's parameters and quality fields.
std::string density_meta(const measure::PeriodicMeasure& pm);
void write_density(std::ostream& out, const config::RunConfig& cfg, const measure::PeriodicMeasure& pm);

void write_pullback(std::ostream& out, const config::RunConfig& cfg,
                    const std::vector<pullback::RandomPointSample>& samples);

void write_sweep(std::ostream& out, const config::RunConfig& cfg,
                 const std::vector<indicators::IndicatorRecord>& rows);

// Reads the body of a density CSV back; comment lines are skipped.
measure::PeriodicMeasure read_density(std::istream& in, const measure::GridSpec& grid);

}  // namespace srlab::report
