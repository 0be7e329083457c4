// SPDX-License-Identifier: Apache-2.0
//
// rabwet: rotary antenna beamforming toolkit for wireless energy transfer
// Distributed under the Apache License, Version 2.0; see LICENSE.

#ifndef RABWET_CONFIG_HPP
#define RABWET_CONFIG_HPP

#include "rabwet/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rabwet {

// Experiment description shared by the harness and the command line. Field
// names are the config keys; the grammar is sectioned key = value lines.
struct ScenarioConfig {
    // [array]
    int m = 4;

    // [scenario]
    double p_T = 3.0;        // transmit power budget, watts
    double alpha = 2.0;      // path-loss exponent
    double ref_loss = 1e-4;  // large-scale gain at 1 m
    double region_radius = 10.0;
    std::string channel = "los"; // "los" or "rician"
    double kappa_db = 5.0;       // Rician factor, dB, used iff channel == "rician"

    // [grid]
    double grid_half_width = 10.0;
    double grid_spacing = 0.1;
    double exclusion_radius = 0.5; // near-field mask around the beacon

    // [sweep]
    long long trials = 1000;
    std::uint64_t master_seed = 1;
    std::vector<int> sizes = {1, 2, 4, 8, 12, 16, 24, 32};
    std::vector<double> thresholds_dbm = {-22.0};
    std::vector<std::string> schemes = {"AA-SS-I", "AA-SS-II", "SA", "AA-IS", "RPS-EMW", "RAB"};
    std::vector<std::string> modes = {"uniform", "heuristic", "lp"};
    bool include_full_csi = true;
    bool include_sa = true;
    std::vector<double> deltas = {0.25, 0.5, 1.0, 2.0,
                                  std::numeric_limits<double>::infinity()};

    // [sar]
    std::string sar_file;
    std::vector<int> sar_steps = {1, 2};
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline double parse_double(const std::string& v, const std::string& where) {
    const std::string t = trim(v);
    if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(where + ": expected a number, got '" + v + "'");
    return x;
}

inline long long parse_int(const std::string& v, const std::string& where) {
    const std::string t = trim(v);
    char* end = nullptr;
    const long long x = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(where + ": expected an integer, got '" + v + "'");
    return x;
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& where) {
    const std::string t = trim(v);
    char* end = nullptr;
    const unsigned long long x = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || end != t.c_str() + t.size())
        throw ConfigError(where + ": expected a nonnegative integer, got '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
    const std::string t = trim(v);
    if (t == "true") return true;
    if (t == "false") return false;
    throw ConfigError(where + ": expected true or false, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> items;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) items.push_back(trim(cur));
    if (!items.empty() && items.back().empty()) items.pop_back();
    return items;
}

inline std::vector<double> parse_double_list(const std::string& v, const std::string& where) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(parse_double(item, where));
    if (out.empty()) throw ConfigError(where + ": list must not be empty");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& v, const std::string& where) {
    std::vector<int> out;
    for (const auto& item : split_list(v))
        out.push_back(static_cast<int>(parse_int(item, where)));
    if (out.empty()) throw ConfigError(where + ": list must not be empty");
    return out;
}

inline std::string to_upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

inline std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Dispatch one key = value onto the config. Returns the section the key
// belongs to so file parsing can enforce placement; throws on unknown keys.
inline std::string set_config_key(ScenarioConfig& cfg, const std::string& key,
                                  const std::string& value, const std::string& where) {
    if (key == "m") {
        cfg.m = static_cast<int>(parse_int(value, where));
        return "array";
    }
    if (key == "p_T") { cfg.p_T = parse_double(value, where); return "scenario"; }
    if (key == "alpha") { cfg.alpha = parse_double(value, where); return "scenario"; }
    if (key == "ref_loss") { cfg.ref_loss = parse_double(value, where); return "scenario"; }
    if (key == "region_radius") {
        cfg.region_radius = parse_double(value, where);
        return "scenario";
    }
    if (key == "channel") {
        cfg.channel = to_lower(trim(value));
        return "scenario";
    }
    if (key == "kappa_db") { cfg.kappa_db = parse_double(value, where); return "scenario"; }
    if (key == "grid_half_width") {
        cfg.grid_half_width = parse_double(value, where);
        return "grid";
    }
    if (key == "grid_spacing") { cfg.grid_spacing = parse_double(value, where); return "grid"; }
    if (key == "exclusion_radius") {
        cfg.exclusion_radius = parse_double(value, where);
        return "grid";
    }
    if (key == "trials") { cfg.trials = parse_int(value, where); return "sweep"; }
    if (key == "master_seed") { cfg.master_seed = parse_u64(value, where); return "sweep"; }
    if (key == "sizes") { cfg.sizes = parse_int_list(value, where); return "sweep"; }
    if (key == "thresholds_dbm") {
        cfg.thresholds_dbm = parse_double_list(value, where);
        return "sweep";
    }
    if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& item : split_list(value)) cfg.schemes.push_back(to_upper(item));
        if (cfg.schemes.empty()) throw ConfigError(where + ": list must not be empty");
        return "sweep";
    }
    if (key == "modes") {
        cfg.modes.clear();
        for (const auto& item : split_list(value)) cfg.modes.push_back(to_lower(item));
        if (cfg.modes.empty()) throw ConfigError(where + ": list must not be empty");
        return "sweep";
    }
    if (key == "include_full_csi") {
        cfg.include_full_csi = parse_bool(value, where);
        return "sweep";
    }
    if (key == "include_sa") { cfg.include_sa = parse_bool(value, where); return "sweep"; }
    if (key == "deltas") { cfg.deltas = parse_double_list(value, where); return "sweep"; }
    if (key == "sar_file") { cfg.sar_file = trim(value); return "sar"; }
    if (key == "sar_steps") { cfg.sar_steps = parse_int_list(value, where); return "sar"; }
    throw ConfigError(where + ": unknown key '" + key + "'");
}

}  // namespace detail

// Range checks that hold for every entry point; called after all overrides.
inline void validate_config(const ScenarioConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
    if (cfg.m < 1 || cfg.m > 512) fail("m must be in [1, 512]");
    if (!(cfg.p_T > 0)) fail("p_T must be positive");
    if (!(cfg.alpha > 0)) fail("alpha must be positive");
    if (!(cfg.ref_loss > 0)) fail("ref_loss must be positive");
    if (!(cfg.region_radius > 0)) fail("region_radius must be positive");
    if (cfg.channel != "los" && cfg.channel != "rician")
        fail("channel must be 'los' or 'rician'");
    if (!(cfg.grid_half_width > 0)) fail("grid_half_width must be positive");
    if (!(cfg.grid_spacing > 0)) fail("grid_spacing must be positive");
    if (cfg.exclusion_radius < 0) fail("exclusion_radius must be nonnegative");
    if (cfg.trials < 1) fail("trials must be at least 1");
    for (int s : cfg.sizes)
        if (s < 1) fail("sizes entries must be at least 1");
    static const std::vector<std::string> known_schemes = {
        "AA-SS-I", "AA-SS-II", "SA", "AA-IS", "RPS-EMW", "RAB", "FULL-CSI"};
    for (const auto& s : cfg.schemes)
        if (std::find(known_schemes.begin(), known_schemes.end(), s) == known_schemes.end())
            fail("unknown scheme '" + s + "'");
    for (const auto& mode : cfg.modes)
        if (mode != "uniform" && mode != "heuristic" && mode != "lp")
            fail("unknown mode '" + mode + "' (want uniform, heuristic or lp)");
    for (double d : cfg.deltas)
        if (!(d > 0)) fail("deltas entries must be positive");
    for (int j : cfg.sar_steps)
        if (j < 1 || j > cfg.m) fail("sar_steps entries must be in [1, m]");
}

// Parse sectioned key = value text onto cfg. '#' or ';' lines are comments;
// keys must appear under their own section header. Errors carry file:line.
inline void apply_config_text(ScenarioConfig& cfg, const std::string& text,
                              const std::string& filename) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = filename + ":" + std::to_string(lineno);
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = detail::trim(t.substr(1, t.size() - 2));
            if (section != "array" && section != "scenario" && section != "grid" &&
                section != "sweep" && section != "sar")
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected key = value");
        if (section.empty())
            throw ConfigError(where + ": key outside any section");
        const std::string key = detail::trim(t.substr(0, eq));
        const std::string value = detail::trim(t.substr(eq + 1));
        const std::string home = detail::set_config_key(cfg, key, value, where);
        if (home != section)
            throw ConfigError(where + ": key '" + key + "' belongs in [" + home + "]");
    }
}

inline void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(cfg, ss.str(), path);
}

// One --set KEY=VALUE override; KEY may be bare or section-qualified.
inline void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set " + assignment + ": expected KEY=VALUE");
    std::string key = detail::trim(assignment.substr(0, eq));
    const std::string value = detail::trim(assignment.substr(eq + 1));
    std::string section;
    const std::size_t dot = key.find('.');
    if (dot != std::string::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
    }
    const std::string home = detail::set_config_key(cfg, key, value, "--set " + assignment);
    if (!section.empty() && section != home)
        throw ConfigError("--set " + assignment + ": key '" + key + "' belongs in [" + home +
                          "]");
}

namespace detail {

template <typename T>
std::string join_list(const std::vector<T>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        if constexpr (std::is_same_v<T, std::string>) out += items[i];
        else if constexpr (std::is_same_v<T, double>) out += format_number_exact(items[i]);
        else out += std::to_string(items[i]);
    }
    return out;
}

}  // namespace detail

// Full effective config in the same grammar the parser accepts, so a round
// trip through the echo reproduces the run exactly.
inline std::string render_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    out << "[array]\n";
    out << "m = " << cfg.m << "\n";
    out << "\n[scenario]\n";
    out << "p_T = " << format_number_exact(cfg.p_T) << "\n";
    out << "alpha = " << format_number_exact(cfg.alpha) << "\n";
    out << "ref_loss = " << format_number_exact(cfg.ref_loss) << "\n";
    out << "region_radius = " << format_number_exact(cfg.region_radius) << "\n";
    out << "channel = " << cfg.channel << "\n";
    out << "kappa_db = " << format_number_exact(cfg.kappa_db) << "\n";
    out << "\n[grid]\n";
    out << "grid_half_width = " << format_number_exact(cfg.grid_half_width) << "\n";
    out << "grid_spacing = " << format_number_exact(cfg.grid_spacing) << "\n";
    out << "exclusion_radius = " << format_number_exact(cfg.exclusion_radius) << "\n";
    out << "\n[sweep]\n";
    out << "trials = " << cfg.trials << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "sizes = " << detail::join_list(cfg.sizes) << "\n";
    out << "thresholds_dbm = " << detail::join_list(cfg.thresholds_dbm) << "\n";
    out << "schemes = " << detail::join_list(cfg.schemes) << "\n";
    out << "modes = " << detail::join_list(cfg.modes) << "\n";
    out << "include_full_csi = " << (cfg.include_full_csi ? "true" : "false") << "\n";
    out << "include_sa = " << (cfg.include_sa ? "true" : "false") << "\n";
    out << "deltas = " << detail::join_list(cfg.deltas) << "\n";
    out << "\n[sar]\n";
    if (!cfg.sar_file.empty()) out << "sar_file = " << cfg.sar_file << "\n";
    out << "sar_steps = " << detail::join_list(cfg.sar_steps) << "\n";
    return out.str();
}

inline void write_effective_config(const ScenarioConfig& cfg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << render_config(cfg);
    out.flush();
    if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace rabwet

#endif  // RABWET_CONFIG_HPP
