#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "srlab/errors.hpp"
#include "srlab/indicators.hpp"
#include "srlab/measure.hpp"
#include "srlab/noise.hpp"
#include "srlab/parallel.hpp"
#include "srlab/pullback.hpp"
#include "srlab/rds.hpp"
#include "srlab/report.hpp"

namespace srlab::cli {

namespace fs = std::filesystem;
using config::format_double;
using config::RunConfig;

int exit_code(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return kConfig;
    if (dynamic_cast<const ConvergenceError*>(&e)) return kConvergence;
    if (dynamic_cast<const NumericalError*>(&e)) return kNumerical;
    return kUsage;
}

int comparison_factor(const measure::GridSpec& grid) {
    int best = 1;
    for (int f = 1; f <= grid.n_bins; ++f) {
        if (grid.n_bins % f == 0 && f * grid.width() <= 0.4 + 1e-9) best = f;
    }
    return best;
}

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name, std::ostream& log) {
    fs::create_directories(cfg.out);
    const fs::path file = fs::path(cfg.out) / name;
    std::ofstream out(file);
    if (!out) throw ConfigError("cannot write " + file.string());
    log << "wrote " << file.string() << "\n";
    return out;
}

std::vector<measure::Method> methods_of(config::MethodSel sel) {
    switch (sel) {
        case config::MethodSel::Mc: return {measure::Method::Mc};
        case config::MethodSel::Pde: return {measure::Method::Pde};
        case config::MethodSel::Both: return {measure::Method::Mc, measure::Method::Pde};
    }
    return {};
}

measure::PeriodicMeasure compute_measure(const RunConfig& cfg, measure::Method m, double sigma) {
    const rds::SdeSystem system = cfg.system(sigma);
    return m == measure::Method::Mc ? measure::mc_periodic_measure(system, cfg.mc_options())
                                    : measure::fp_periodic_measure(system, cfg.fp_options());
}

void log_indicators(std::ostream& log, const indicators::IndicatorRecord& r) {
    log << measure::to_string(r.method) << ": p_minus=" << format_double(r.p_minus)
        << " p_plus=" << format_double(r.p_plus) << " p=" << format_double(r.p)
        << " x_bar=" << format_double(r.x_bar) << "\n";
}

std::vector<pullback::RandomPointSample> pullback_samples(const RunConfig& cfg, int n_seeds) {
    const rds::SdeSystem system = cfg.system();
    const pullback::PullbackConfig pc = cfg.pullback_config();
    const double dt = cfg.sde_dt();
    const std::int64_t k_tau = noise::aligned_index(cfg.tau, dt);
    std::vector<pullback::RandomPointSample> samples(static_cast<std::size_t>(n_seeds));
    parallel_chunks(samples.size(), resolve_workers(cfg.workers), [&](unsigned, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            noise::WienerGrid path(sample_seed(cfg, static_cast<int>(i)), dt, k_tau, k_tau);
            samples[i] = pullback::random_point(system, path, cfg.tau, pc);
        }
    });
    return samples;
}

}  // namespace

int cmd_simulate(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const rds::SdeSystem system = cfg.system();
    const double dt = cfg.sde_dt();
    const std::int64_t k0 = noise::aligned_index(cfg.tau, dt);
    const auto n = static_cast<std::int64_t>(std::llround(cfg.t_span / dt));
    std::vector<report::SeriesPoint> rows;
    if (n > 0) {
        const noise::WienerGrid path(cfg.seed, dt, k0, k0 + n);
        const auto xs = rds::trajectory(system, path, static_cast<double>(k0) * dt, static_cast<double>(n) * dt,
                                        cfg.x0, cfg.record_every);
        rows.reserve(xs.size());
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double t = static_cast<double>(k0 + static_cast<std::int64_t>(j) * cfg.record_every) * dt;
            rows.push_back({t, xs[j], cfg.amplitude * std::cos(cfg.nu * t)});
        }
    }
    auto out = open_output(cfg, "simulate.csv", log);
    report::write_series(out, cfg, rows);
    int crossings = 0;
    for (std::size_t j = 1; j < rows.size(); ++j) crossings += (rows[j].x > 0.0) != (rows[j - 1].x > 0.0);
    log << "steps=" << n << " dt=" << format_double(dt) << " rows=" << rows.size()
        << " sign_changes=" << crossings << "\n";
    return kOk;
}

int cmd_measure(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    std::vector<measure::PeriodicMeasure> results;
    std::ostringstream rep;
    for (const auto m : methods_of(cfg.method)) {
        auto pm = compute_measure(cfg, m, cfg.sigma);
        auto out = open_output(cfg, "density_" + measure::to_string(m) + ".csv", log);
        report::write_density(out, cfg, pm);
        rep << "meta " << report::density_meta(pm) << "\n";
        log_indicators(rep, indicators::resonance_indicator(pm));
        results.push_back(std::move(pm));
    }
    if (results.size() == 2) {
        const auto& mc = results[0].densities.front();
        const auto& pde = results[1].densities.front();
        const int f = comparison_factor(mc.grid());
        rep << "l1_fine=" << format_double(measure::l1_distance(mc, pde)) << "\n"
            << "l1_coarse=" << format_double(measure::l1_distance(measure::coarsen(mc, f), measure::coarsen(pde, f)))
            << " (cells merged by " << f << ")\n";
    }
    auto out = open_output(cfg, "measure_report.txt", log);
    out << rep.str();
    log << rep.str();
    return kOk;
}

int cmd_pullback(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    const auto samples = pullback_samples(cfg, cfg.n_seeds);
    auto out = open_output(cfg, "pullback.csv", log);
    report::write_pullback(out, cfg, samples);
    const auto converged = std::count_if(samples.begin(), samples.end(), [](const auto& s) { return s.converged; });
    log << "converged " << converged << " of " << samples.size() << " seeds\n";
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    for (const auto m : methods_of(cfg.method)) {
        const auto rows = indicators::sigma_sweep(rds::Drift::duffing(cfg.duffing()), cfg.sigma_list,
                                                  cfg.sweep_config(m));
        auto out = open_output(cfg, "sweep_" + measure::to_string(m) + ".csv", log);
        report::write_sweep(out, cfg, rows);
        for (const auto& r : rows) {
            log << "sigma=" << format_double(r.sigma) << " ";
            if (r.ok) {
                log_indicators(log, r);
            } else {
                log << "failed: " << r.error << "\n";
            }
        }
    }
    return kOk;
}

// ---- property suite -----------------------------------------------------------

namespace {

double normal_cdf(double x, double sd) { return 0.5 * std::erfc(-x / (sd * std::sqrt(2.0))); }

template <typename Fn>
CheckResult run_check(const std::string& name, Fn&& fn) {
    CheckResult r{name, false, ""};
    try {
        std::ostringstream detail;
        r.pass = fn(detail);
        r.detail = detail.str();
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
    }
    return r;
}

}  // namespace

std::vector<CheckResult> run_checks(const RunConfig& cfg) {
    cfg.validate();
    const rds::SdeSystem system = cfg.system();
    const rds::DuffingDrift duffing = cfg.duffing();
    const double T = cfg.period();
    const double dt = cfg.sde_dt();
    std::mt19937_64 rng(cfg.seed);
    std::vector<CheckResult> results;

    results.push_back(run_check("cocycle-discrete", [&](std::ostream& d) {
        const auto rds = rds::DiscretePeriodicRDS::standard();
        std::uniform_int_distribution<int> small(0, 12);
        std::uniform_real_distribution<double> xs(-5.0, 5.0);
        int bad = 0;
        for (int i = 0; i < 1000; ++i) {
            const rds::SymbolSequence omega(rng(), rds.p1);
            const int n = small(rng), k = small(rng), m = small(rng) - 6;
            const double x = xs(rng);
            const double lhs = rds::discrete_step(rds, n + k, m, omega, x);
            const double rhs = rds::discrete_step(rds, n, m + k, omega.shifted(k), rds::discrete_step(rds, k, m, omega, x));
            const bool periodic = rds::discrete_step(rds, n, m + 2, omega, x) == rds::discrete_step(rds, n, m, omega, x);
            bad += (lhs != rhs) || !periodic || rds::discrete_step(rds, 0, m, omega, x) != x;
        }
        d << bad << " violations in 1000 cases";
        return bad == 0;
    }));

    results.push_back(run_check("cocycle-em", [&](std::ostream& d) {
        std::uniform_int_distribution<int> steps(0, 2000);
        int bad = 0;
        for (int i = 0; i < 100; ++i) {
            const std::int64_t a = steps(rng), b = steps(rng), m = steps(rng) - 1000;
            const noise::WienerGrid path(rng(), dt, m, m + a + b);
            const double x0 = std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
            const double whole = rds::evolve_steps(system, path, m, a + b, x0);
            const double split = rds::evolve_steps(system, path, m + a, b, rds::evolve_steps(system, path, m, a, x0));
            bad += whole != split;
        }
        d << bad << " inexact compositions in 100 cases";
        return bad == 0;
    }));

    results.push_back(run_check("dissipativity", [&](std::ostream& d) {
        const auto dc = rds::dissipativity_constants(duffing);
        std::uniform_real_distribution<double> xs(-1e3, 1e3), ts(0.0, T);
        double worst = -1e300;
        for (int i = 0; i < 100000; ++i) {
            worst = std::max(worst, rds::dissipativity_lhs(duffing, ts(rng), xs(rng), xs(rng), dc.l2) - dc.l1);
        }
        d << "L1=" << format_double(dc.l1) << " L2=" << format_double(dc.l2) << " max excess " << worst;
        return worst <= 1e-9;
    }));

    results.push_back(run_check("pullback-sync", [&](std::ostream& d) {
        const auto samples = pullback_samples(cfg, cfg.n_seeds);
        int converged = 0, nonmonotone = 0;
        for (const auto& s : samples) {
            if (!s.converged) continue;
            ++converged;
            for (std::size_t j = 1; j < s.history.size(); ++j) {
                nonmonotone += s.history[j].image.diameter() > s.history[j - 1].image.diameter();
            }
        }
        d << converged << " of " << samples.size() << " converged, " << nonmonotone << " diameter increases";
        return converged * 100 >= 95 * static_cast<int>(samples.size()) && nonmonotone == 0;
    }));

    results.push_back(run_check("periodicity", [&](std::ostream& d) {
        const int n = std::min(cfg.n_seeds, 20);
        const auto pc = cfg.pullback_config();
        int good = 0;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            const std::int64_t k = noise::aligned_index(cfg.tau, dt);
            noise::WienerGrid path(sample_seed(cfg, i), dt, k, k);
            const auto r = pullback::verify_periodicity(system, path, cfg.tau, pc);
            worst = std::max(worst, r.residual);
            good += r.converged && r.residual < 1e-4;
        }
        d << good << " of " << n << " below 1e-4, worst " << worst;
        return good * 20 >= 19 * n;
    }));

    const measure::FpOptions fp = cfg.fp_options();

    results.push_back(run_check("pde-ou-oracle", [&](std::ostream& d) {
        const rds::SdeSystem ou{rds::Drift::linear(1.0, T), cfg.sigma};
        const auto pm = measure::fp_periodic_measure(ou, fp);
        const double sd = cfg.sigma / std::sqrt(2.0);
        const auto& g = pm.grid();
        double l1 = 0.0;
        for (int i = 0; i < g.n_bins; ++i) {
            const double exact = normal_cdf(g.lower(i + 1), sd) - normal_cdf(g.lower(i), sd);
            l1 += std::abs(pm.densities.front().mass(i) - exact);
        }
        d << "L1 to N(0, sigma^2/2) = " << l1;
        return l1 < 1e-3;
    }));

    results.push_back(run_check("pde-mass", [&](std::ostream& d) {
        const auto grid_dt = rds::aligned_step(T, fp.dt, std::lcm<std::int64_t>(64, fp.phases));
        measure::FokkerPlanckSolver solver(system, fp.grid, grid_dt.dt, 0.0);
        double worst = 0.0;
        for (int p = 0; p < 5; ++p) {
            const auto& before = solver.masses();
            const double m0 = std::accumulate(before.begin(), before.end(), 0.0);
            solver.advance(grid_dt.steps_per_period);
            const auto& after = solver.masses();
            worst = std::max(worst, std::abs(std::accumulate(after.begin(), after.end(), 0.0) - m0));
        }
        d << "max mass change per period " << worst;
        return worst < 1e-10;
    }));

    measure::PeriodicMeasure pde;
    results.push_back(run_check("pde-cycle", [&](std::ostream& d) {
        measure::FpOptions o = fp;
        o.tol = std::min(fp.tol, 1e-3);
        o.max_periods = 20;
        pde = measure::fp_periodic_measure(system, o);
        d << "cycle distance " << pde.cycle_distance << " after " << pde.periods_run << " periods";
        return pde.cycle_distance < 1e-3;
    }));

    results.push_back(run_check("mc-vs-pde", [&](std::ostream& d) {
        if (pde.densities.empty()) throw NumericalError("no PDE measure");
        const auto mc = measure::mc_periodic_measure(system, cfg.mc_options());
        const int f = comparison_factor(mc.grid());
        const double l1 = measure::l1_distance(measure::coarsen(mc.densities.front(), f),
                                               measure::coarsen(pde.densities.front(), f));
        const std::size_t half = mc.phases() / 2;
        const double refl = measure::l1_distance(measure::coarsen(mc.densities.front(), f),
                                                 measure::coarsen(measure::reflect(mc.densities[half]), f));
        d << "L1(MC, PDE) = " << l1 << ", MC reflection L1 = " << refl << " (cells merged by " << f << ")";
        return l1 < 0.05 && refl < 0.08;
    }));

    results.push_back(run_check("reflection-pde", [&](std::ostream& d) {
        if (pde.densities.empty() || pde.phases() % 2 != 0) throw NumericalError("no PDE measure with even K");
        const double l1 = measure::l1_distance(pde.densities.front(), measure::reflect(pde.densities[pde.phases() / 2]));
        const auto ind = indicators::resonance_indicator(pde);
        d << "L1(rho_tau, reflected rho_tau+T/2) = " << l1 << ", |p- - p+| = " << std::abs(ind.p_minus - ind.p_plus);
        return l1 < 1e-6 && std::abs(ind.p_minus - ind.p_plus) < 0.05;
    }));

    results.push_back(run_check("birkhoff", [&](std::ostream& d) {
        if (pde.densities.empty()) throw NumericalError("no PDE measure");
        const int n = 400;
        const std::int64_t k = noise::aligned_index(cfg.tau, dt);
        noise::WienerGrid path(cfg.seed, dt, k, k);
        const auto sample = pullback::random_point(system, path, cfg.tau, cfg.pullback_config());
        const measure::Range left = measure::Range::at_most(0.0);
        const double freq = measure::birkhoff_frequency(system, path, sample, left, n);
        const double target = pde.densities.front().mass_in(left);
        const double budget = 3.0 / std::sqrt(n) + 0.05;
        d << "frequency " << freq << " vs rho_tau(B) " << target;
        return std::abs(freq - target) < budget;
    }));

    return results;
}

int cmd_check(const RunConfig& cfg, std::ostream& log) {
    const auto start = std::chrono::steady_clock::now();
    const auto results = run_checks(cfg);
    int failed = 0;
    for (const auto& r : results) {
        log << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        failed += !r.pass;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log << (results.size() - failed) << "/" << results.size() << " checks passed in " << secs << " s\n";
    return failed == 0 ? kOk : kPropertyFailure;
}

}  // namespace srlab::cli
