#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpch/experiment.hpp"

namespace lpch {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

/// "inf" is accepted for the Lebesgue exponent.
inline double parse_exponent(const std::string& s) {
    const std::string t = trim(s);
    if (t == "inf" || t == "Inf" || t == "INF") return kInf;
    return std::stod(t);
}

} // namespace detail

/// Sectioned key = value file ('#' and ';' start comments):
///
///   [initial_data]  d, k, N, sigma, p
///   [grid]          m, m_perp, baseline_m
///   [solver]        steps_per_run, dealias
///   [sweep]         eps, n_list, seed
///   [output]        dir
inline void apply_config_file(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string qualified = section.empty() ? key : section + "." + key;

        if (qualified == "initial_data.d") cfg.spec.d = std::stoi(value);
        else if (qualified == "initial_data.k") cfg.spec.k = std::stoi(value);
        else if (qualified == "initial_data.N") cfg.spec.n_max = std::stoi(value);
        else if (qualified == "initial_data.sigma") cfg.spec.sigma = std::stod(value);
        else if (qualified == "initial_data.p") cfg.spec.p = detail::parse_exponent(value);
        else if (qualified == "grid.m") cfg.grid_m = std::stoi(value);
        else if (qualified == "grid.m_perp") cfg.grid_m_perp = std::stoi(value);
        else if (qualified == "grid.baseline_m") cfg.baseline_grid_m = std::stoi(value);
        else if (qualified == "solver.steps_per_run") cfg.steps_per_run = std::stoi(value);
        else if (qualified == "solver.dealias") cfg.dealias = std::stod(value);
        else if (qualified == "sweep.eps") cfg.eps_list = detail::parse_double_list(value);
        else if (qualified == "sweep.n_list") cfg.n_list = detail::parse_int_list(value);
        else if (qualified == "sweep.seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (qualified == "output.dir") cfg.out_dir = value;
        else
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + qualified + "'");
    }
}

} // namespace lpch
