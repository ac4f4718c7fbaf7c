#pragma once

// Scenario description shared by the command-line runner: system parameters,
// solver mode, initial state, grids and requested outputs, with a flat
// "dotted.key = value" text form that round-trips exactly.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "vic/model.hpp"

namespace vic {

enum class Mode { wea_vacuum, wea_newbasis, wea_probe, full, spectrum, quasienergies, steady_sweep };

inline std::string to_string(Mode m) {
    switch (m) {
        case Mode::wea_vacuum: return "wea-vacuum";
        case Mode::wea_newbasis: return "wea-newbasis";
        case Mode::wea_probe: return "wea-probe";
        case Mode::full: return "full";
        case Mode::spectrum: return "spectrum";
        case Mode::quasienergies: return "quasienergies";
        case Mode::steady_sweep: return "steady-sweep";
    }
    return "?";
}

inline Mode parse_mode(std::string_view s) {
    for (Mode m : {Mode::wea_vacuum, Mode::wea_newbasis, Mode::wea_probe, Mode::full, Mode::spectrum,
                   Mode::quasienergies, Mode::steady_sweep})
        if (s == to_string(m)) return m;
    throw ConfigError("mode: unknown value '" + std::string(s) +
                      "' (expected wea-vacuum, wea-newbasis, wea-probe, full, spectrum, quasienergies, steady-sweep)");
}

inline bool is_wea(Mode m) { return m == Mode::wea_vacuum || m == Mode::wea_newbasis || m == Mode::wea_probe; }

enum class InitialKind { psi1, ground, dark, bright, custom_diagonal };

inline std::string to_string(InitialKind k) {
    switch (k) {
        case InitialKind::psi1: return "psi1";
        case InitialKind::ground: return "ground";
        case InitialKind::dark: return "dark";
        case InitialKind::bright: return "bright";
        case InitialKind::custom_diagonal: return "custom-diagonal";
    }
    return "?";
}

inline InitialKind parse_initial(std::string_view s) {
    for (InitialKind k : {InitialKind::psi1, InitialKind::ground, InitialKind::dark, InitialKind::bright,
                          InitialKind::custom_diagonal})
        if (s == to_string(k)) return k;
    throw ConfigError("initial: unknown state '" + std::string(s) +
                      "' (expected psi1, ground, dark, bright, custom-diagonal)");
}

/// Either an explicit list of points or `count` evenly spaced points on
/// [start, stop].
struct Grid {
    double start = 0.0;
    double stop = 0.0;
    int count = 0;
    std::vector<double> list;

    static Grid linspace(double a, double b, int n) { return {a, b, n, {}}; }
    static Grid of(std::vector<double> v) { return {0.0, 0.0, 0, std::move(v)}; }

    bool empty() const { return list.empty() && count == 0; }

    std::vector<double> points() const {
        if (!list.empty()) return list;
        std::vector<double> out(static_cast<std::size_t>(std::max(count, 0)));
        if (count == 1) out[0] = start;
        for (int k = 0; count > 1 && k < count; ++k) out[k] = start + (stop - start) * k / (count - 1);
        return out;
    }

    bool operator==(const Grid&) const = default;
};

struct Scenario {
    std::string name = "custom";
    Mode mode = Mode::full;
    SystemParams params;
    InitialKind initial = InitialKind::ground;
    std::vector<double> initial_diagonal;  // custom-diagonal only
    Grid times;
    Grid omegas;
    Grid deltas;
    std::vector<std::string> outputs;
    bool compare_two_level = false;  // wea-vacuum: add the two-level variant
    std::string steady_model = "wea-probe";  // steady-sweep: wea-probe or full
    double tol = 1e-9;

    bool operator==(const Scenario&) const = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t from = 0;
    while (true) {
        const auto at = s.find(sep, from);
        out.push_back(trim(s.substr(from, at == std::string_view::npos ? std::string_view::npos : at - from)));
        if (at == std::string_view::npos) break;
        from = at + 1;
    }
    return out;
}

inline double parse_real(std::string_view field, std::string_view text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigError(std::string(field) + ": expected a finite real number, got '" + t + "'");
    }
    return v;
}

inline int parse_int(std::string_view field, std::string_view text) {
    const std::string t = trim(text);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError(std::string(field) + ": expected an integer, got '" + t + "'");
    }
    return v;
}

inline bool parse_bool(std::string_view field, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(std::string(field) + ": expected true or false, got '" + t + "'");
}

inline std::string format_real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// "start:stop:count" or a comma-separated list.
inline Grid parse_grid(std::string_view field, std::string_view text) {
    const std::string t = trim(text);
    if (t.find(':') != std::string::npos) {
        const auto parts = split(t, ':');
        if (parts.size() != 3) throw ConfigError(std::string(field) + ": range must be start:stop:count");
        const Grid g = Grid::linspace(parse_real(field, parts[0]), parse_real(field, parts[1]),
                                      parse_int(field, parts[2]));
        if (g.count < 1) throw ConfigError(std::string(field) + ": count must be at least 1");
        return g;
    }
    std::vector<double> v;
    for (const auto& p : split(t, ',')) v.push_back(parse_real(field, p));
    return Grid::of(std::move(v));
}

inline std::string format_grid(const Grid& g) {
    if (!g.list.empty()) {
        std::string s;
        for (std::size_t k = 0; k < g.list.size(); ++k) s += (k ? "," : "") + format_real(g.list[k]);
        return s;
    }
    return format_real(g.start) + ":" + format_real(g.stop) + ":" + std::to_string(g.count);
}

inline void check_grid(std::string_view field, const Grid& g) {
    const auto p = g.points();
    if (p.empty()) throw ConfigError(std::string(field) + ": grid is empty");
    for (std::size_t k = 1; k < p.size(); ++k)
        if (!(p[k] > p[k - 1])) throw ConfigError(std::string(field) + ": grid must be strictly increasing");
}

}  // namespace detail

/// Maps a parameter name (as used in config keys and sweep axes) to the
/// corresponding SystemParams field. N is handled separately.
inline double* param_field(SystemParams& p, std::string_view name) {
    if (name == "g") return &p.g;
    if (name == "kappa") return &p.kappa;
    if (name == "gamma1") return &p.gamma1;
    if (name == "gamma2") return &p.gamma2;
    if (name == "Delta") return &p.Delta;
    if (name == "delta") return &p.delta;
    if (name == "omega_alpha") return &p.omega_alpha;
    if (name == "omega_beta") return &p.omega_beta;
    if (name == "G1") return &p.G1;
    if (name == "G2") return &p.G2;
    return nullptr;
}

inline constexpr const char* kParamNames[] = {"g",     "kappa",       "gamma1",     "gamma2", "Delta",
                                              "delta", "omega_alpha", "omega_beta", "G1",     "G2"};

/// Sets one named parameter; "gamma" and "G" set both channels, "N" the
/// truncation.
inline void set_param(SystemParams& p, std::string_view name, double value) {
    if (name == "N") {
        if (value != std::floor(value)) throw ConfigError("N: must be an integer");
        p.N = static_cast<int>(value);
    } else if (name == "gamma") {
        p.gamma1 = p.gamma2 = value;
    } else if (name == "G") {
        p.G1 = p.G2 = value;
    } else if (double* f = param_field(p, name)) {
        *f = value;
    } else {
        throw ConfigError("unknown parameter '" + std::string(name) + "'");
    }
}

inline void validate(const Scenario& s) {
    const auto& p = s.params;
    for (const char* name : kParamNames) {
        SystemParams q = p;
        if (!std::isfinite(*param_field(q, name))) throw ConfigError(std::string("params.") + name + ": not finite");
    }
    if (p.kappa != 1.0) throw ConfigError("params.kappa: rates are in units of kappa; kappa is fixed at 1");
    if (p.gamma1 < 0.0) throw ConfigError("params.gamma1: must be non-negative");
    if (p.gamma2 < 0.0) throw ConfigError("params.gamma2: must be non-negative");
    if (p.N < 1) throw ConfigError("params.N: must be at least 1");
    if (!(s.tol > 0.0 && s.tol < 1e-2)) throw ConfigError("tol: must lie in (0, 1e-2)");
    if (is_wea(s.mode) && p.N != 2) throw ConfigError("params.N: reduced (wea-*) modes are defined for N = 2 only");
    if (s.mode == Mode::wea_newbasis) {
        if (p.gamma1 != p.gamma2) throw ConfigError("params.gamma2: wea-newbasis requires gamma1 == gamma2");
        if (p.Delta != 0.0) throw ConfigError("params.Delta: wea-newbasis requires Delta = 0");
        if (p.G1 != p.G2) throw ConfigError("params.G2: wea-newbasis requires G1 == G2");
    }
    if (s.compare_two_level && s.mode != Mode::wea_vacuum) {
        throw ConfigError("compare: two-level comparison is only available in wea-vacuum mode");
    }
    const bool timed = is_wea(s.mode) || s.mode == Mode::full;
    if (timed) {
        detail::check_grid("times", s.times);
        if (s.times.points().front() != 0.0) throw ConfigError("times: grid must start at 0");
    }
    if (s.mode == Mode::spectrum) detail::check_grid("omegas", s.omegas);
    if (s.mode == Mode::steady_sweep) {
        detail::check_grid("deltas", s.deltas);
        if (s.steady_model != "wea-probe" && s.steady_model != "full") {
            throw ConfigError("steady.model: expected wea-probe or full, got '" + s.steady_model + "'");
        }
        if (s.steady_model == "wea-probe" && p.N != 2) throw ConfigError("params.N: steady.model wea-probe needs N = 2");
    }
    if (s.initial == InitialKind::custom_diagonal) {
        const std::size_t want = is_wea(s.mode) || (s.mode == Mode::steady_sweep && s.steady_model == "wea-probe")
                                     ? 4u
                                     : static_cast<std::size_t>(kAtomDim * p.N);
        if (s.initial_diagonal.size() != want) {
            throw ConfigError("initial.diagonal: expected " + std::to_string(want) + " populations, got " +
                              std::to_string(s.initial_diagonal.size()));
        }
        double sum = 0.0;
        for (double v : s.initial_diagonal) {
            if (v < 0.0) throw ConfigError("initial.diagonal: populations must be non-negative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-10) throw ConfigError("initial.diagonal: populations must sum to 1");
    } else if (!s.initial_diagonal.empty()) {
        throw ConfigError("initial.diagonal: only allowed with initial = custom-diagonal");
    }
}

/// Flat config text; parse_config(to_config(s)) == s.
inline std::string to_config(const Scenario& s) {
    using detail::format_real;
    std::ostringstream out;
    out << "name = " << s.name << "\n";
    out << "mode = " << to_string(s.mode) << "\n";
    SystemParams p = s.params;
    for (const char* name : kParamNames) out << "params." << name << " = " << format_real(*param_field(p, name)) << "\n";
    out << "params.N = " << s.params.N << "\n";
    out << "initial = " << to_string(s.initial) << "\n";
    if (!s.initial_diagonal.empty()) out << "initial.diagonal = " << detail::format_grid(Grid::of(s.initial_diagonal)) << "\n";
    if (!s.times.empty()) out << "times = " << detail::format_grid(s.times) << "\n";
    if (!s.omegas.empty()) out << "omegas = " << detail::format_grid(s.omegas) << "\n";
    if (!s.deltas.empty()) out << "deltas = " << detail::format_grid(s.deltas) << "\n";
    if (!s.outputs.empty()) {
        out << "outputs = ";
        for (std::size_t k = 0; k < s.outputs.size(); ++k) out << (k ? "," : "") << s.outputs[k];
        out << "\n";
    }
    out << "compare = " << (s.compare_two_level ? "two-level" : "none") << "\n";
    out << "steady.model = " << s.steady_model << "\n";
    out << "tol = " << format_real(s.tol) << "\n";
    return out.str();
}

inline Scenario parse_config(std::string_view text) {
    Scenario s;
    s.outputs.clear();
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value', got '" + t + "'");
        }
        const std::string key = detail::trim(std::string_view(t).substr(0, eq));
        const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (seen.count(key)) {
            throw ConfigError(key + ": duplicate key (lines " + std::to_string(seen[key]) + " and " +
                              std::to_string(lineno) + ")");
        }
        seen[key] = lineno;

        if (key == "name") {
            if (value.empty()) throw ConfigError("name: must not be empty");
            s.name = value;
        } else if (key == "mode") {
            s.mode = parse_mode(value);
        } else if (key.rfind("params.", 0) == 0) {
            const std::string field = key.substr(7);
            if (field == "N") {
                s.params.N = detail::parse_int(key, value);
            } else if (double* f = param_field(s.params, field)) {
                *f = detail::parse_real(key, value);
            } else {
                throw ConfigError(key + ": unknown parameter");
            }
        } else if (key == "initial") {
            s.initial = parse_initial(value);
        } else if (key == "initial.diagonal") {
            s.initial_diagonal = detail::parse_grid(key, value).points();
        } else if (key == "times") {
            s.times = detail::parse_grid(key, value);
        } else if (key == "omegas") {
            s.omegas = detail::parse_grid(key, value);
        } else if (key == "deltas") {
            s.deltas = detail::parse_grid(key, value);
        } else if (key == "outputs") {
            s.outputs = detail::split(value, ',');
            for (const auto& o : s.outputs)
                if (o.empty()) throw ConfigError("outputs: empty observable name");
        } else if (key == "compare") {
            if (value == "two-level") {
                s.compare_two_level = true;
            } else if (value == "none") {
                s.compare_two_level = false;
            } else {
                throw ConfigError("compare: expected two-level or none, got '" + value + "'");
            }
        } else if (key == "steady.model") {
            s.steady_model = value;
        } else if (key == "tol") {
            s.tol = detail::parse_real(key, value);
        } else {
            throw ConfigError(key + ": unknown key");
        }
    }
    if (!seen.count("mode")) throw ConfigError("mode: required key is missing");
    if (!seen.count("outputs")) {
        switch (s.mode) {
            case Mode::full: s.outputs = {"n_alpha", "n_beta", "n_c"}; break;
            case Mode::spectrum: s.outputs = {"S"}; break;
            case Mode::quasienergies: break;
            default: s.outputs = {"rho11"}; break;
        }
    }
    validate(s);
    return s;
}

// ---------------------------------------------------------------------------
// Built-in presets, fig2a..fig8b.

namespace detail {

inline Scenario preset_base(std::string name, Mode mode) {
    Scenario s;
    s.name = std::move(name);
    s.mode = mode;
    s.params.N = 2;
    return s;
}

}  // namespace detail

inline std::vector<Scenario> builtin_scenarios() {
    using detail::preset_base;
    std::vector<Scenario> out;

    // Vacuum trapping: psi1 start, g in {0.1, 6}, with and without emitter decay.
    const struct { const char* name; double g, gamma; } fig2[] = {
        {"fig2a", 0.1, 1.0}, {"fig2b", 6.0, 1.0}, {"fig2c", 0.1, 0.0}, {"fig2d", 6.0, 0.0}};
    for (const auto& f : fig2) {
        Scenario s = preset_base(f.name, Mode::wea_vacuum);
        s.params.g = f.g;
        s.params.gamma1 = s.params.gamma2 = f.gamma;
        s.initial = InitialKind::psi1;
        s.times = Grid::linspace(0.0, 50.0, 1001);
        s.outputs = {"rho11"};
        s.compare_two_level = true;
        out.push_back(s);
    }
    {
        Scenario s = preset_base("fig3", Mode::wea_vacuum);
        s.params.g = 6.0;
        s.initial = InitialKind::psi1;
        s.times = Grid::linspace(0.0, 10.0, 1001);
        s.outputs = {"rho22", "rho12"};
        out.push_back(s);
    }
    // Probe driving from the ground state; (a) gamma = kappa, (b) gamma = 0.
    for (const auto& [suffix, gamma] : {std::pair{"a", 1.0}, std::pair{"b", 0.0}}) {
        Scenario s = preset_base(std::string("fig4") + suffix, Mode::wea_probe);
        s.params.g = 2.0;
        s.params.G1 = 0.1;
        s.params.gamma1 = s.params.gamma2 = gamma;
        s.initial = InitialKind::ground;
        s.times = Grid::linspace(0.0, 100.0, 1001);
        s.outputs = {"rho11", "rho33", "rho12"};
        out.push_back(s);
    }
    for (const auto& [suffix, gamma] : {std::pair{"a", 1.0}, std::pair{"b", 0.0}}) {
        Scenario s = preset_base(std::string("fig5") + suffix, Mode::wea_probe);
        s.params.g = 2.0;
        s.params.G1 = s.params.G2 = 0.1;
        s.params.gamma1 = s.params.gamma2 = gamma;
        s.initial = InitialKind::ground;
        s.times = Grid::linspace(0.0, 100.0, 1001);
        s.outputs = {"rho11", "rho33"};
        out.push_back(s);
    }
    // Steady state versus probe detuning; (a) gamma = 0, (b) gamma = kappa.
    for (const auto& [suffix, gamma] : {std::pair{"a", 0.0}, std::pair{"b", 1.0}}) {
        Scenario s = preset_base(std::string("fig6") + suffix, Mode::steady_sweep);
        s.params.g = 2.0;
        s.params.G1 = s.params.G2 = 0.1;
        s.params.gamma1 = s.params.gamma2 = gamma;
        s.initial = InitialKind::ground;
        s.deltas = Grid::linspace(-6.0, 6.0, 1201);
        s.outputs = {"rho11", "rho33"};
        out.push_back(s);
    }
    // Strong single-sided drive, WEA (N = 2) against N = 3.
    for (const auto& [suffix, n] : {std::pair{"a", 2}, std::pair{"b", 3}}) {
        Scenario s = preset_base(std::string("fig7") + suffix, Mode::full);
        s.params.g = 2.0;
        s.params.omega_alpha = 1.0;
        s.params.N = n;
        s.initial = InitialKind::ground;
        s.times = Grid::linspace(0.0, 50.0, 501);
        s.outputs = {"n_alpha", "n_beta", "n_c"};
        out.push_back(s);
    }
    for (const auto& [suffix, n] : {std::pair{"c", 2}, std::pair{"d", 3}}) {
        Scenario s = preset_base(std::string("fig7") + suffix, Mode::spectrum);
        s.params.g = 2.0;
        s.params.omega_alpha = 1.0;
        s.params.N = n;
        s.initial = InitialKind::ground;
        s.omegas = Grid::linspace(-4.0, 4.0, 801);
        s.outputs = {"S"};
        out.push_back(s);
    }
    // Antisymmetric drive of the dark state.
    for (const auto& [suffix, omega] : {std::pair{"a", 0.1}, std::pair{"b", 1.0}}) {
        Scenario s = preset_base(std::string("fig8") + suffix, Mode::full);
        s.params.g = 2.0;
        s.params.omega_alpha = omega;
        s.params.omega_beta = -omega;
        s.params.N = 3;
        s.initial = InitialKind::ground;
        s.times = Grid::linspace(0.0, 50.0, 501);
        s.outputs = {"n_alpha", "n_beta", "n_c"};
        out.push_back(s);
    }
    return out;
}

/// Preset by exact name; a bare family name ("fig2") selects its first panel.
inline std::optional<Scenario> find_preset(std::string_view name) {
    const auto all = builtin_scenarios();
    for (const auto& s : all)
        if (s.name == name) return s;
    for (const auto& s : all)
        if (s.name.size() == name.size() + 1 && s.name.compare(0, name.size(), name) == 0) return s;
    return std::nullopt;
}

}  // namespace vic
