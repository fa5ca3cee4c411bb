#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "srlab/indicators.hpp"
#include "srlab/measure.hpp"
#include "srlab/pullback.hpp"
#include "srlab/rds.hpp"

namespace srlab::config {

enum class MethodSel { Mc, Pde, Both };
std::string to_string(MethodSel m);
MethodSel parse_method_sel(const std::string& name);

/// Everything a command needs, as one flat record. Its text form is a list of
/// `key = value` lines; doubles are written with 17 significant digits so that
/// parse(to_text(c)) == c.
struct RunConfig {
    std::string preset = "fast";

    // model
    double alpha = 1.0;
    double beta = 1.0;
    double amplitude = 0.12;
    double nu = 0.1;
    double sigma = 0.5;
    double tau = 0.0;

    // numerics
    double dt = 0.01;      // SDE step, rounded onto the period grid
    double pde_dt = 0.01;  // Fokker-Planck step
    double x_min = -5.0;
    double x_max = 5.0;
    int n_bins = 500;
    int phases = 16;
    double pde_tol = 1e-6;
    int max_periods = 200;
    int spinup_periods = 5;
    std::int64_t n_paths = 10000;
    bool pullback_sampling = false;

    // pullback; schedule entries are multiples of the period
    std::vector<double> s_schedule{1, 2, 4, 8, 16};
    double init_lo = -3.0;
    double init_hi = 3.0;
    double pullback_tol = 1e-6;
    int n_seeds = 20;

    // simulate
    double t_span = 60.0 * std::numbers::pi;  // time units; three periods at nu = 0.1
    std::int64_t record_every = 1;
    double x0 = 0.0;

    std::uint64_t seed = 1;
    MethodSel method = MethodSel::Pde;
    std::vector<double> sigma_list{0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6};
    std::string out = ".";
    unsigned workers = 0;

    static RunConfig preset_named(const std::string& name);

    // Applies one `key = value` assignment; ConfigError on unknown keys or
    // malformed values. `preset` resets every field to that preset first, so it
    // belongs on the first line.
    void set(const std::string& key, const std::string& value);
    // Applies every assignment of a config text; `#` starts a comment.
    void apply_text(const std::string& text);
    void apply_file(const std::string& path);

    std::string to_text() const;
    static RunConfig parse(const std::string& text);

    // Enforces the constraints of every module the config feeds.
    void validate() const;

    double period() const;
    rds::DuffingDrift duffing() const;
    rds::SdeSystem system() const;
    rds::SdeSystem system(double sigma_override) const;
    measure::GridSpec grid() const;
    measure::McOptions mc_options() const;
    measure::FpOptions fp_options() const;
    pullback::PullbackConfig pullback_config() const;
    indicators::SweepConfig sweep_config(measure::Method m) const;
    // SDE grid step after rounding.
    double sde_dt() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// "0.15,0.2,0.3" or "start:step:stop" (inclusive, tolerant to rounding).
std::vector<double> parse_sigma_list(const std::string& text);
std::string format_double(double v);

}  // namespace srlab::config
