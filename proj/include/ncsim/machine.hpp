#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ncsim/vec3.hpp"

namespace ncsim {

/// Per-axis machine capability envelope plus controller constants.
/// All values strictly SI: m/s, m/s^2, m/s^3, s, m.
struct MachineLimits {
    Vec3 v_max{};           // axis speed caps [m/s]
    Vec3 a_max{};           // axis acceleration caps [m/s^2]
    Vec3 j_max{};           // axis jerk caps [m/s^3]
    double jc_max = 0.0;    // tangential jerk cap on curvature discontinuities [m/s^3]
    double interp_period = 0.0;  // interpolation cycle [s]
    Vec3 tol{};             // per-axis corner tolerance [m]

    double min_v_max() const { return std::min({v_max.x, v_max.y, v_max.z}); }
    double min_a_max() const { return std::min({a_max.x, a_max.y, a_max.z}); }
    double min_j_max() const { return std::min({j_max.x, j_max.y, j_max.z}); }
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

struct ConfigEntry {
    double value;
    std::string unit;
    int line;
};

inline double unit_factor_speed(const std::string& u, const std::string& key, int line) {
    if (u.empty() || u == "m/s") return 1.0;
    if (u == "m/min") return 1.0 / 60.0;
    if (u == "mm/min") return 1.0e-3 / 60.0;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': unknown speed unit '" + u + "'");
}

inline double unit_factor_accel(const std::string& u, const std::string& key, int line) {
    if (u.empty() || u == "m/s^2") return 1.0;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': unknown acceleration unit '" + u + "'");
}

inline double unit_factor_jerk(const std::string& u, const std::string& key, int line) {
    if (u.empty() || u == "m/s^3") return 1.0;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': unknown jerk unit '" + u + "'");
}

inline double unit_factor_time(const std::string& u, const std::string& key, int line) {
    if (u.empty() || u == "s") return 1.0;
    if (u == "ms") return 1.0e-3;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': unknown time unit '" + u + "'");
}

inline double unit_factor_length(const std::string& u, const std::string& key, int line) {
    if (u.empty() || u == "m") return 1.0;
    if (u == "mm") return 1.0e-3;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "': unknown length unit '" + u + "'");
}

}  // namespace detail

/// Parse a machine config from flat `key = value [unit]` text.
///
/// Scalar keys (v_max, a_max, j_max, tol) apply to all three axes; axis forms
/// (v_max_x, ...) override per axis. jc_max and interp_period are scalar only.
/// '#' starts a comment. Throws ConfigError with key and line on bad input.
inline MachineLimits load_machine_config(const std::string& text) {
    std::map<std::string, detail::ConfigEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value [unit]'");
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string rhs = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (rhs.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key + "': missing value");
        std::istringstream vs(rhs);
        std::string num, unit, extra;
        vs >> num >> unit >> extra;
        if (!extra.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                              "': trailing text '" + extra + "'");
        double value;
        try {
            std::size_t pos = 0;
            value = std::stod(num, &pos);
            if (pos != num.size()) throw std::invalid_argument(num);
        } catch (const std::exception&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": key '" + key +
                              "': unparseable number '" + num + "'");
        }
        entries[key] = {value, unit, lineno};
    }

    MachineLimits lim;
    auto take_axis = [&](const std::string& base, Vec3& out,
                         double (*factor)(const std::string&, const std::string&, int)) {
        std::optional<double> scalar;
        if (auto it = entries.find(base); it != entries.end()) {
            scalar = it->second.value * factor(it->second.unit, base, it->second.line);
            if (*scalar <= 0.0)
                throw ConfigError("config line " + std::to_string(it->second.line) + ": key '" + base +
                                  "': value must be positive");
            entries.erase(it);
        }
        const char* suffix[3] = {"_x", "_y", "_z"};
        bool have[3] = {false, false, false};
        for (int a = 0; a < 3; ++a) {
            std::string k = base + suffix[a];
            if (auto it = entries.find(k); it != entries.end()) {
                double v = it->second.value * factor(it->second.unit, k, it->second.line);
                if (v <= 0.0)
                    throw ConfigError("config line " + std::to_string(it->second.line) + ": key '" + k +
                                      "': value must be positive");
                out[a] = v;
                have[a] = true;
                entries.erase(it);
            }
        }
        for (int a = 0; a < 3; ++a) {
            if (!have[a]) {
                if (!scalar) throw ConfigError("config: missing key '" + base + "'" +
                                               (have[0] || have[1] || have[2]
                                                    ? " (scalar or all axis forms required)"
                                                    : ""));
                out[a] = *scalar;
            }
        }
    };

    take_axis("v_max", lim.v_max, detail::unit_factor_speed);
    take_axis("a_max", lim.a_max, detail::unit_factor_accel);
    take_axis("j_max", lim.j_max, detail::unit_factor_jerk);
    take_axis("tol", lim.tol, detail::unit_factor_length);

    auto take_scalar = [&](const std::string& key,
                           double (*factor)(const std::string&, const std::string&, int)) {
        auto it = entries.find(key);
        if (it == entries.end()) throw ConfigError("config: missing key '" + key + "'");
        double v = it->second.value * factor(it->second.unit, key, it->second.line);
        if (v <= 0.0)
            throw ConfigError("config line " + std::to_string(it->second.line) + ": key '" + key +
                              "': value must be positive");
        entries.erase(it);
        return v;
    };
    lim.jc_max = take_scalar("jc_max", detail::unit_factor_jerk);
    lim.interp_period = take_scalar("interp_period", detail::unit_factor_time);

    if (!entries.empty())
        throw ConfigError("config line " + std::to_string(entries.begin()->second.line) +
                          ": unknown key '" + entries.begin()->first + "'");
    if (lim.interp_period < 1e-6)
        throw ConfigError("config: interp_period must be at least 1e-6 s");
    return lim;
}

/// Serialize in canonical SI units with full precision, so that
/// load(serialize(lim)) reproduces the limits bitwise.
inline std::string serialize_machine_config(const MachineLimits& lim) {
    char buf[64];
    std::string out;
    auto emit = [&](const std::string& key, double v, const char* unit) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += key + " = " + buf + (unit[0] ? std::string(" ") + unit : "") + "\n";
    };
    const char* ax[3] = {"_x", "_y", "_z"};
    for (int a = 0; a < 3; ++a) emit(std::string("v_max") + ax[a], lim.v_max[a], "m/s");
    for (int a = 0; a < 3; ++a) emit(std::string("a_max") + ax[a], lim.a_max[a], "m/s^2");
    for (int a = 0; a < 3; ++a) emit(std::string("j_max") + ax[a], lim.j_max[a], "m/s^3");
    emit("jc_max", lim.jc_max, "m/s^3");
    emit("interp_period", lim.interp_period, "s");
    for (int a = 0; a < 3; ++a) emit(std::string("tol") + ax[a], lim.tol[a], "m");
    return out;
}

/// Sanity report for a limits struct built in code (the parser enforces the
/// same rules itself). Returns human-readable violation strings; empty = ok.
inline std::vector<std::string> validate_limits(const MachineLimits& lim) {
    std::vector<std::string> report;
    auto pos3 = [&](const Vec3& v, const char* name) {
        const char* ax = "xyz";
        for (int a = 0; a < 3; ++a)
            if (!(v[a] > 0.0) || !std::isfinite(v[a]))
                report.push_back(std::string(name) + "_" + ax[a] + " must be positive and finite");
    };
    pos3(lim.v_max, "v_max");
    pos3(lim.a_max, "a_max");
    pos3(lim.j_max, "j_max");
    pos3(lim.tol, "tol");
    if (!(lim.jc_max > 0.0) || !std::isfinite(lim.jc_max))
        report.push_back("jc_max must be positive and finite");
    if (!(lim.interp_period >= 1e-6) || !std::isfinite(lim.interp_period))
        report.push_back("interp_period must be at least 1e-6 s");
    return report;
}

}  // namespace ncsim
