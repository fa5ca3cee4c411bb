#include "srlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "srlab/errors.hpp"

namespace srlab::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(trim(item));
    return parts;
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError("config: " + key + " expects a finite number, got '" + text + "'");
    }
    return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    Int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("config: " + key + " expects an integer, got '" + text + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1") return true;
    if (t == "false" || t == "0") return false;
    throw ConfigError("config: " + key + " expects true or false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(to_double(key, part));
    return out;
}

std::string join(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ",";
        s += format_double(values[i]);
    }
    return s;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError("config: " + message);
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_string(MethodSel m) {
    switch (m) {
        case MethodSel::Mc: return "mc";
        case MethodSel::Pde: return "pde";
        case MethodSel::Both: return "both";
    }
    return "pde";
}

MethodSel parse_method_sel(const std::string& name) {
    const std::string t = trim(name);
    if (t == "mc") return MethodSel::Mc;
    if (t == "pde") return MethodSel::Pde;
    if (t == "both") return MethodSel::Both;
    throw ConfigError("config: method must be mc, pde or both, got '" + name + "'");
}

std::vector<double> parse_sigma_list(const std::string& text) {
    const std::string t = trim(text);
    if (t.find(':') == std::string::npos) {
        auto list = to_list("sigma_list", t);
        require(!list.empty(), "sigma_list is empty");
        return list;
    }
    const auto parts = split(t, ':');
    require(parts.size() == 3, "sigma range must be start:step:stop");
    const double start = to_double("sigma_list", parts[0]);
    const double step = to_double("sigma_list", parts[1]);
    const double stop = to_double("sigma_list", parts[2]);
    require(step > 0.0 && stop >= start, "sigma range needs step > 0 and stop >= start");
    const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    for (std::int64_t i = 0; i <= count; ++i) {
        // round to 12 digits so 0.15 + 3 * 0.05 prints as 0.3
        const double v = start + static_cast<double>(i) * step;
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

RunConfig RunConfig::preset_named(const std::string& name) {
    RunConfig c;
    if (name == "fast") return c;
    if (name == "paper") {
        c.preset = "paper";
        c.nu = 0.001;
        c.sigma = 0.285;
        c.dt = 0.05;
        c.pde_dt = 0.5;
        c.pde_tol = 1e-4;
        c.max_periods = 300;
        c.spinup_periods = 2;
        c.n_paths = 1000;
        c.init_lo = -2.0;
        c.init_hi = 2.0;
        c.n_seeds = 10;
        c.record_every = 10;
        c.t_span = 3.0 * c.period();
        return c;
    }
    throw ConfigError("config: unknown preset '" + name + "' (expected fast or paper)");
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"preset", [](RunConfig& c, const std::string&, const std::string& v) { c = preset_named(trim(v)); }},
        {"alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha = to_double(k, v); }},
        {"beta", [](RunConfig& c, const std::string& k, const std::string& v) { c.beta = to_double(k, v); }},
        {"A", [](RunConfig& c, const std::string& k, const std::string& v) { c.amplitude = to_double(k, v); }},
        {"nu", [](RunConfig& c, const std::string& k, const std::string& v) { c.nu = to_double(k, v); }},
        {"sigma", [](RunConfig& c, const std::string& k, const std::string& v) { c.sigma = to_double(k, v); }},
        {"tau", [](RunConfig& c, const std::string& k, const std::string& v) { c.tau = to_double(k, v); }},
        {"dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.dt = to_double(k, v); }},
        {"pde_dt", [](RunConfig& c, const std::string& k, const std::string& v) { c.pde_dt = to_double(k, v); }},
        {"x_min", [](RunConfig& c, const std::string& k, const std::string& v) { c.x_min = to_double(k, v); }},
        {"x_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.x_max = to_double(k, v); }},
        {"n_bins", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_bins = to_int<int>(k, v); }},
        {"K", [](RunConfig& c, const std::string& k, const std::string& v) { c.phases = to_int<int>(k, v); }},
        {"pde_tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.pde_tol = to_double(k, v); }},
        {"max_periods",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.max_periods = to_int<int>(k, v); }},
        {"spinup_periods",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.spinup_periods = to_int<int>(k, v); }},
        {"n_paths",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.n_paths = to_int<std::int64_t>(k, v); }},
        {"pullback_sampling",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.pullback_sampling = to_bool(k, v); }},
        {"s_schedule", [](RunConfig& c, const std::string& k, const std::string& v) { c.s_schedule = to_list(k, v); }},
        {"init_lo", [](RunConfig& c, const std::string& k, const std::string& v) { c.init_lo = to_double(k, v); }},
        {"init_hi", [](RunConfig& c, const std::string& k, const std::string& v) { c.init_hi = to_double(k, v); }},
        {"pullback_tol",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.pullback_tol = to_double(k, v); }},
        {"n_seeds", [](RunConfig& c, const std::string& k, const std::string& v) { c.n_seeds = to_int<int>(k, v); }},
        {"t_span", [](RunConfig& c, const std::string& k, const std::string& v) { c.t_span = to_double(k, v); }},
        {"record_every",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.record_every = to_int<std::int64_t>(k, v); }},
        {"x0", [](RunConfig& c, const std::string& k, const std::string& v) { c.x0 = to_double(k, v); }},
        {"seed",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = to_int<std::uint64_t>(k, v); }},
        {"method", [](RunConfig& c, const std::string&, const std::string& v) { c.method = parse_method_sel(v); }},
        {"sigma_list",
         [](RunConfig& c, const std::string&, const std::string& v) { c.sigma_list = parse_sigma_list(v); }},
        {"out", [](RunConfig& c, const std::string&, const std::string& v) { c.out = trim(v); }},
        {"workers",
         [](RunConfig& c, const std::string& k, const std::string& v) { c.workers = to_int<unsigned>(k, v); }},
    };
    const std::string key = trim(raw_key);
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second(*this, key, value);
}

void RunConfig::apply_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(number) + " is not key = value: '" + line + "'");
        }
        set(line.substr(0, eq), line.substr(eq + 1));
    }
}

void RunConfig::apply_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    apply_text(buf.str());
}

std::string RunConfig::to_text() const {
    std::ostringstream o;
    o << "preset = " << preset << "\n"
      << "alpha = " << format_double(alpha) << "\n"
      << "beta = " << format_double(beta) << "\n"
      << "A = " << format_double(amplitude) << "\n"
      << "nu = " << format_double(nu) << "\n"
      << "sigma = " << format_double(sigma) << "\n"
      << "tau = " << format_double(tau) << "\n"
      << "dt = " << format_double(dt) << "\n"
      << "pde_dt = " << format_double(pde_dt) << "\n"
      << "x_min = " << format_double(x_min) << "\n"
      << "x_max = " << format_double(x_max) << "\n"
      << "n_bins = " << n_bins << "\n"
      << "K = " << phases << "\n"
      << "pde_tol = " << format_double(pde_tol) << "\n"
      << "max_periods = " << max_periods << "\n"
      << "spinup_periods = " << spinup_periods << "\n"
      << "n_paths = " << n_paths << "\n"
      << "pullback_sampling = " << (pullback_sampling ? "true" : "false") << "\n"
      << "s_schedule = " << join(s_schedule) << "\n"
      << "init_lo = " << format_double(init_lo) << "\n"
      << "init_hi = " << format_double(init_hi) << "\n"
      << "pullback_tol = " << format_double(pullback_tol) << "\n"
      << "n_seeds = " << n_seeds << "\n"
      << "t_span = " << format_double(t_span) << "\n"
      << "record_every = " << record_every << "\n"
      << "x0 = " << format_double(x0) << "\n"
      << "seed = " << seed << "\n"
      << "method = " << to_string(method) << "\n"
      << "sigma_list = " << join(sigma_list) << "\n"
      << "out = " << out << "\n"
      << "workers = " << workers << "\n";
    return o.str();
}

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    c.apply_text(text);
    return c;
}

double RunConfig::period() const { return duffing().period(); }

rds::DuffingDrift RunConfig::duffing() const { return {alpha, beta, amplitude, nu}; }

rds::SdeSystem RunConfig::system() const { return system(sigma); }

rds::SdeSystem RunConfig::system(double sigma_override) const {
    return {rds::Drift::duffing(duffing()), sigma_override};
}

measure::GridSpec RunConfig::grid() const { return {x_min, x_max, n_bins}; }

double RunConfig::sde_dt() const {
    return rds::aligned_step(period(), dt, std::lcm<std::int64_t>(64, phases)).dt;
}

measure::McOptions RunConfig::mc_options() const {
    measure::McOptions o;
    o.n_paths = n_paths;
    o.phases = phases;
    o.spinup_periods = spinup_periods;
    o.grid = grid();
    o.seed = seed;
    o.tau = tau;
    o.dt = dt;
    o.pullback_sampling = pullback_sampling;
    o.pullback = pullback_config();
    o.workers = workers;
    return o;
}

measure::FpOptions RunConfig::fp_options() const {
    measure::FpOptions o;
    o.grid = grid();
    o.dt = pde_dt;
    o.max_periods = max_periods;
    o.tol = pde_tol;
    o.phases = phases;
    o.tau = tau;
    return o;
}

pullback::PullbackConfig RunConfig::pullback_config() const {
    pullback::PullbackConfig p;
    p.init = {init_lo, init_hi};
    p.tol = pullback_tol;
    const double T = period();
    for (const double s : s_schedule) p.schedule.push_back(s * T);
    return p;
}

indicators::SweepConfig RunConfig::sweep_config(measure::Method m) const {
    indicators::SweepConfig s;
    s.method = m;
    s.mc = mc_options();
    s.fp = fp_options();
    s.workers = workers;
    return s;
}

void RunConfig::validate() const {
    require(preset == "fast" || preset == "paper", "preset must be fast or paper");
    try {
        duffing().validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    require(sigma > 0.0, "sigma must be > 0");
    require(dt > 0.0 && pde_dt > 0.0, "dt and pde_dt must be > 0");
    require(x_min < x_max, "x_min must be < x_max");
    require(n_bins >= 2, "n_bins must be >= 2");
    require(phases >= 2, "K must be >= 2");
    require(pde_tol > 0.0, "pde_tol must be > 0");
    require(max_periods >= 1, "max_periods must be >= 1");
    require(spinup_periods >= 1, "spinup_periods must be >= 1");
    require(n_paths >= 100, "n_paths must be >= 100");
    require(!s_schedule.empty() && s_schedule.front() > 0.0, "s_schedule needs positive entries");
    require(std::is_sorted(s_schedule.begin(), s_schedule.end()) &&
                std::adjacent_find(s_schedule.begin(), s_schedule.end()) == s_schedule.end(),
            "s_schedule must be strictly increasing");
    require(init_lo < init_hi, "init_lo must be < init_hi");
    require(pullback_tol > 0.0, "pullback_tol must be > 0");
    require(n_seeds >= 1, "n_seeds must be >= 1");
    require(t_span >= 0.0, "t_span must be >= 0");
    require(record_every >= 1, "record_every must be >= 1");
    require(!sigma_list.empty(), "sigma_list is empty");
    require(sigma_list.front() > 0.0, "sigma_list entries must be > 0");
    for (std::size_t i = 1; i < sigma_list.size(); ++i) {
        require(sigma_list[i] > sigma_list[i - 1], "sigma_list must be ascending");
    }
    require(!out.empty(), "out must not be empty");

    const double step = sde_dt();
    const double radius = std::max({std::abs(init_lo), std::abs(init_hi), std::abs(x0)});
    const double bound = rds::em_monotone_dt_bound(duffing(), radius);
    if (step > bound) {
        throw ConfigError("config: dt = " + format_double(step) + " exceeds the order-preservation bound " +
                          format_double(bound) + " on |x| <= " + format_double(radius));
    }
    if (method != MethodSel::Mc) {
        const double widest = std::max(sigma, sigma_list.back());
        const double half = measure::required_half_width(system(widest));
        if (x_min > -half || x_max < half) {
            throw ConfigError("config: PDE grid [" + format_double(x_min) + ", " + format_double(x_max) +
                              "] must cover [-" + format_double(half) + ", " + format_double(half) +
                              "] for sigma up to " + format_double(widest));
        }
    }
}

}  // namespace srlab::config
