#include "srlab/report.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

#include "json.hpp"
#include "srlab/errors.hpp"

namespace srlab::report {

using config::format_double;

void write_config_header(std::ostream& out, const config::RunConfig& cfg) {
    std::istringstream lines(cfg.to_text());
    std::string line;
    while (std::getline(lines, line)) out << "# " << line << "\n";
}

void write_series(std::ostream& out, const config::RunConfig& cfg, const std::vector<SeriesPoint>& rows) {
    write_config_header(out, cfg);
    out << "t,x,forcing\n";
    for (const auto& r : rows) {
        out << format_double(r.t) << "," << format_double(r.x) << "," << format_double(r.forcing) << "\n";
    }
}

std::string density_meta(const measure::PeriodicMeasure& pm) {
    nlohmann::ordered_json meta;
    meta["method"] = measure::to_string(pm.method);
    meta["period"] = pm.period;
    meta["tau"] = pm.tau;
    meta["sigma"] = pm.sigma;
    meta["phases"] = pm.phases();
    meta["x_min"] = pm.grid().x_min;
    meta["x_max"] = pm.grid().x_max;
    meta["n_bins"] = pm.grid().n_bins;
    if (pm.method == measure::Method::Mc) {
        meta["seed"] = pm.seed;
        meta["n_paths"] = pm.n_paths;
        meta["drops"] = pm.drops;
        meta["clamped"] = pm.clamped;
    } else {
        meta["tol"] = pm.tol;
        meta["periods_run"] = pm.periods_run;
        meta["cycle_distance"] = pm.cycle_distance;
    }
    return meta.dump();
}

void write_density(std::ostream& out, const config::RunConfig& cfg, const measure::PeriodicMeasure& pm) {
    write_config_header(out, cfg);
    out << "# meta " << density_meta(pm) << "\n";
    out << "phase_time,bin_center,mass\n";
    const auto& g = pm.grid();
    for (std::size_t k = 0; k < pm.phases(); ++k) {
        const std::string t = format_double(pm.phase_times[k]);
        for (int i = 0; i < g.n_bins; ++i) {
            out << t << "," << format_double(g.center(i)) << "," << format_double(pm.densities[k].mass(i)) << "\n";
        }
    }
}

void write_pullback(std::ostream& out, const config::RunConfig& cfg,
                    const std::vector<pullback::RandomPointSample>& samples) {
    write_config_header(out, cfg);
    out << "seed,tau,pullback_time,diameter,value,converged\n";
    for (const auto& s : samples) {
        out << s.seed << "," << format_double(s.tau) << "," << format_double(s.pullback_time) << ","
            << format_double(s.diameter) << "," << format_double(s.value) << "," << (s.converged ? 1 : 0) << "\n";
    }
}

void write_sweep(std::ostream& out, const config::RunConfig& cfg,
                 const std::vector<indicators::IndicatorRecord>& rows) {
    write_config_header(out, cfg);
    out << "sigma,p_minus,p_plus,p,x_bar,method,n_paths_or_tol,drops\n";
    for (const auto& r : rows) {
        if (!r.ok) out << "# sigma " << format_double(r.sigma) << " failed: " << r.error << "\n";
        const auto num = [&](double v) { return r.ok ? format_double(v) : std::string("nan"); };
        out << format_double(r.sigma) << "," << num(r.p_minus) << "," << num(r.p_plus) << "," << num(r.p) << ","
            << num(r.x_bar) << "," << measure::to_string(r.method) << "," << format_double(r.n_paths_or_tol) << ","
            << r.drops << "\n";
    }
}

namespace {

// strtod rather than stod: tail masses can be subnormal, which stod rejects.
double parse_cell(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') throw ConfigError("read_density: bad number '" + text + "'");
    return v;
}

}  // namespace

measure::PeriodicMeasure read_density(std::istream& in, const measure::GridSpec& grid) {
    std::map<double, std::vector<double>> by_phase;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "phase_time,bin_center,mass") throw ConfigError("read_density: unexpected header");
            header = true;
            continue;
        }
        std::istringstream row(line);
        std::string a, b, c;
        std::getline(row, a, ',');
        std::getline(row, b, ',');
        std::getline(row, c, ',');
        by_phase[parse_cell(a)].push_back(parse_cell(c));
    }
    measure::PeriodicMeasure pm;
    for (auto& [t, masses] : by_phase) {
        pm.phase_times.push_back(t);
        pm.densities.emplace_back(grid, std::move(masses));
    }
    return pm;
}

}  // namespace srlab::report
