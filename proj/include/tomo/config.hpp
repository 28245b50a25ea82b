#pragma once
// Flat key = value run configuration. '#' starts a comment, blank lines are
// skipped, unknown keys are errors (they are always typos).

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "biphoton.hpp"
#include "talbot.hpp"

namespace tomo {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    TalbotParams talbot;
    GridSpec grid;
    CombParams comb;
    double window_t = 10.0;  // window half-width, units of 1/width
    int n_grid = 4096;
    std::vector<int> sweep_D = {2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<double> sweep_R = {0.9998, 0.99998, 1.0};
    std::string out_dir = ".";
    int threads = 0;  // 0 resolves via TOMO_THREADS, then hardware

    TimeWindow window() const { return TimeWindow{window_t / comb.width, n_grid}; }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw config_error("bad numeric value for " + key + ": '" + v + "'");
    }
}

inline int to_int(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    const int i = int(x);
    if (double(i) != x) throw config_error("integer expected for " + key + ": '" + v + "'");
    return i;
}

template <typename T, typename F>
std::vector<T> to_list(const std::string& key, const std::string& v, F conv) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(conv(key, item));
    }
    if (out.empty()) throw config_error("empty list for " + key);
    return out;
}

}  // namespace detail

inline void apply_key(RunConfig& c, const std::string& key, const std::string& val) {
    using detail::to_double;
    using detail::to_int;
    if (key == "D") c.talbot.D = to_int(key, val);
    else if (key == "R") c.talbot.R = to_double(key, val);
    else if (key == "ell") c.talbot.ell = to_double(key, val);
    else if (key == "kappa_plus") c.talbot.kappa_plus = to_double(key, val);
    else if (key == "sigma") c.talbot.sigma = to_double(key, val);
    else if (key == "delta") c.talbot.delta = to_double(key, val);
    else if (key == "grid_step") c.grid.step_factor = to_double(key, val);
    else if (key == "grid_margin") c.grid.margin = to_double(key, val);
    else if (key == "grid_copies") c.grid.m_max = to_int(key, val);
    else if (key == "sweep_D") c.sweep_D = detail::to_list<int>(key, val, to_int);
    else if (key == "sweep_R") c.sweep_R = detail::to_list<double>(key, val, to_double);
    else if (key == "pump") c.comb.pump = to_double(key, val);
    else if (key == "spacing") c.comb.spacing = to_double(key, val);
    else if (key == "width") c.comb.width = to_double(key, val);
    else if (key == "env_center") c.comb.env_center = to_double(key, val);
    else if (key == "env_width") c.comb.env_width = to_double(key, val);
    else if (key == "n_teeth") c.comb.n_teeth = to_int(key, val);
    else if (key == "window_T") c.window_t = to_double(key, val);
    else if (key == "n_grid") c.n_grid = to_int(key, val);
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "threads") c.threads = to_int(key, val);
    else throw config_error("unknown config key: " + key);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config: " + path);
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key or value");
        apply_key(c, key, val);
    }
    return c;
}

}  // namespace tomo
