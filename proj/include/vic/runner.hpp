#pragma once

// Executes a Scenario and collects the requested observables into a
// ResultTable. Independent points (sweep values, spectrum frequencies) run
// on a small worker pool; row order never depends on completion order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "vic/analytic.hpp"
#include "vic/scenario.hpp"
#include "vic/spectrum.hpp"
#include "vic/table.hpp"
#include "vic/wea.hpp"

namespace vic {

/// Runs fn(0..count-1) on up to `jobs` threads. The exception thrown for the
/// lowest index, if any, is rethrown on the caller.
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex m;
    std::size_t failed_at = count;
    std::exception_ptr failure;
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

inline int default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------
// Observables

using Observable = std::function<double(const Matrix&)>;

namespace detail {

// rhoIJ / im_rhoIJ with I, J in 1..4.
inline std::optional<std::pair<int, int>> element_name(std::string_view name, bool& imag) {
    imag = name.rfind("im_", 0) == 0;
    if (imag) name.remove_prefix(3);
    if (name.size() != 5 || name.substr(0, 3) != "rho") return std::nullopt;
    const int i = name[3] - '1', j = name[4] - '1';
    if (i < 0 || i >= kWeaDim || j < 0 || j >= kWeaDim) return std::nullopt;
    return std::pair{i, j};
}

inline Vector wea_ket(int index, int n_states) {
    const Level lv[] = {Level::alpha, Level::beta, Level::g, Level::g};
    const int ph[] = {0, 0, 1, 0};
    return basis_ket(lv[index], ph[index], n_states);
}

// Projector onto (|alpha> + sign |beta>)/sqrt2, any photon number.
inline Matrix atomic_superposition(int n_states, double sign) {
    Matrix p = Matrix::Zero(kAtomDim, kAtomDim);
    const int a = index_of(Level::alpha), b = index_of(Level::beta);
    p(a, a) = p(b, b) = 0.5;
    p(a, b) = p(b, a) = 0.5 * sign;
    return embed_atom(OperatorMatrix(SpaceLabel::atom(), p), n_states).matrix();
}

}  // namespace detail

/// Observable on the 4x4 reduced state (psi or phi basis, per mode).
inline Observable wea_observable(const std::string& name) {
    bool imag = false;
    if (auto ij = detail::element_name(name, imag)) {
        const auto [i, j] = *ij;
        return [i, j, imag](const Matrix& r) { return imag ? r(i, j).imag() : r(i, j).real(); };
    }
    if (name == "n_c") return [](const Matrix& r) { return r(2, 2).real(); };
    throw ConfigError("outputs: unknown observable '" + name + "' for reduced modes (use rhoIJ, im_rhoIJ, n_c)");
}

/// Observable on the composite state with N cavity states.
inline Observable full_observable(const std::string& name, int n_states) {
    auto from_op = [](Matrix op) { return [op = std::move(op)](const Matrix& r) { return expectation(r, op).real(); }; };
    if (name == "n_c") return from_op(photon_number(n_states).matrix());
    if (name == "n_alpha") return from_op(level_population(Level::alpha, n_states).matrix());
    if (name == "n_beta") return from_op(level_population(Level::beta, n_states).matrix());
    if (name == "n_g") return from_op(level_population(Level::g, n_states).matrix());
    if (name == "n_dark") return from_op(detail::atomic_superposition(n_states, -1.0));
    if (name == "n_bright") return from_op(detail::atomic_superposition(n_states, +1.0));
    bool imag = false;
    if (auto ij = detail::element_name(name, imag)) {
        if (n_states < 2) throw ConfigError("outputs: '" + name + "' needs N >= 2");
        const Vector bi = detail::wea_ket(ij->first, n_states), bj = detail::wea_ket(ij->second, n_states);
        return [bi, bj, imag](const Matrix& r) {
            const Complex v = bi.dot(r * bj);  // <psi_i| rho |psi_j>
            return imag ? v.imag() : v.real();
        };
    }
    throw ConfigError("outputs: unknown observable '" + name +
                      "' (use n_c, n_alpha, n_beta, n_g, n_dark, n_bright, rhoIJ, im_rhoIJ)");
}

// ---------------------------------------------------------------------------
// Initial states

inline WeaState wea_initial(const Scenario& s) {
    Matrix r = Matrix::Zero(kWeaDim, kWeaDim);
    const double h = 0.5;
    switch (s.initial) {
        case InitialKind::psi1: r(0, 0) = 1.0; break;
        case InitialKind::ground: r(3, 3) = 1.0; break;
        case InitialKind::dark:
        case InitialKind::bright: {
            const double sign = s.initial == InitialKind::dark ? -1.0 : 1.0;
            r(0, 0) = r(1, 1) = h;
            r(0, 1) = r(1, 0) = sign * h;
            break;
        }
        case InitialKind::custom_diagonal:
            // Populations are given in the basis the mode works in.
            for (int i = 0; i < kWeaDim; ++i) r(i, i) = s.initial_diagonal[i];
            return WeaState(r);
    }
    if (s.mode == Mode::wea_newbasis) return WeaState(to_new_basis(r));
    return WeaState(r);
}

inline DensityMatrix full_initial(const Scenario& s) {
    const int n = s.params.N;
    const auto space = SpaceLabel::composite(n);
    switch (s.initial) {
        case InitialKind::psi1: return DensityMatrix::pure(space, basis_ket(Level::alpha, 0, n));
        case InitialKind::ground: return DensityMatrix::pure(space, basis_ket(Level::g, 0, n));
        case InitialKind::dark:
        case InitialKind::bright: {
            const double sign = s.initial == InitialKind::dark ? -1.0 : 1.0;
            return DensityMatrix::pure(space, (basis_ket(Level::alpha, 0, n) + sign * basis_ket(Level::beta, 0, n)) /
                                                  std::sqrt(2.0));
        }
        case InitialKind::custom_diagonal: {
            Matrix r = Matrix::Zero(kAtomDim * n, kAtomDim * n);
            for (int i = 0; i < kAtomDim * n; ++i) r(i, i) = s.initial_diagonal[i];
            return {space, r};
        }
    }
    throw InvalidState("unhandled initial state");
}

// ---------------------------------------------------------------------------
// Models

inline WeaMode wea_mode_of(const Scenario& s) {
    switch (s.mode) {
        case Mode::wea_vacuum: return WeaMode::vacuum;
        case Mode::wea_probe: return WeaMode::probe;
        case Mode::wea_newbasis:
            return s.params.G1 != 0.0 || s.params.G2 != 0.0 ? WeaMode::new_basis_probe : WeaMode::new_basis_vacuum;
        default: throw InvalidState("not a reduced mode: " + to_string(s.mode));
    }
}

inline Liouvillian full_liouvillian(const SystemParams& p) { return build_liouvillian(driven_hamiltonian(p), dissipators(p)); }

/// Whether a scenario is evaluated on the 4-state reduced model.
inline bool uses_reduced_model(const Scenario& s) {
    return is_wea(s.mode) || (s.mode == Mode::steady_sweep && s.steady_model == "wea-probe");
}

struct ModelSetup {
    Liouvillian L;
    DensityMatrix initial;
    std::vector<Observable> observables;
};

inline ModelSetup model_setup(const Scenario& s) {
    if (uses_reduced_model(s)) {
        const WeaMode mode = s.mode == Mode::steady_sweep ? WeaMode::probe : wea_mode_of(s);
        std::vector<Observable> obs;
        for (const auto& o : s.outputs) obs.push_back(wea_observable(o));
        return {WeaGenerator(mode, s.params).liouvillian(), DensityMatrix(wea_space(), wea_initial(s).matrix()),
                std::move(obs)};
    }
    std::vector<Observable> obs;
    for (const auto& o : s.outputs) obs.push_back(full_observable(o, s.params.N));
    return {full_liouvillian(s.params), full_initial(s), std::move(obs)};
}

struct LongTimeState {
    DensityMatrix state;
    bool unique;
};

/// Unique steady state, or the kernel projection of the initial state when
/// the steady state is degenerate.
inline LongTimeState long_time_state(const Liouvillian& L, const DensityMatrix& initial) {
    try {
        return {steady_state(L).state, true};
    } catch (const DegenerateSteadyState&) {
        return {asymptotic_state(L, initial), false};
    }
}

// ---------------------------------------------------------------------------
// Running

namespace detail {

inline std::string config_echo(const Scenario& s) {
    std::string cfg = to_config(s), out;
    for (char c : cfg) out += c == '\n' ? std::string("; ") : std::string(1, c);
    if (out.size() >= 2) out.resize(out.size() - 2);
    return out;
}

inline void common_meta(ResultTable& t, const Scenario& s) {
    t.meta("scenario", s.name);
    t.meta("mode", to_string(s.mode));
    t.meta("version", kVersion);
    t.meta("config", config_echo(s));
    t.meta("tol", format_real(s.tol));
}

inline void physicality_meta(ResultTable& t, const Trajectory& tr, const std::string& prefix = "") {
    t.meta(prefix + "max_trace_drift", format_real(tr.max_trace_drift()));
    t.meta(prefix + "max_hermiticity_residue", format_real(tr.max_hermiticity_residue()));
    t.meta(prefix + "min_eigenvalue", format_real(tr.lowest_eigenvalue()));
}

inline ResultTable run_time_domain(const Scenario& s) {
    const auto times = s.times.points();
    const auto setup = model_setup(s);
    const auto tr = evolve(setup.L, setup.initial, times, s.tol);

    ResultTable t;
    common_meta(t, s);
    physicality_meta(t, tr);
    t.columns.push_back("t");
    const std::string suffix = s.compare_two_level ? "_3level" : "";
    for (const auto& o : s.outputs) t.columns.push_back(o + suffix);

    std::optional<Trajectory> two;
    if (s.compare_two_level) {
        SystemParams q = s.params;
        q.N = 2;
        const auto L2 = build_liouvillian(two_level_variant(q), dissipators(q));
        two = evolve(L2, embed_wea_state(wea_initial(s)), times, s.tol);
        physicality_meta(t, *two, "two_level_");
        for (const auto& o : s.outputs) t.columns.push_back(o + "_2level");
    }
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<double> row{times[k]};
        for (const auto& f : setup.observables) row.push_back(f(tr.states[k]));
        if (two) {
            Matrix sub(kWeaDim, kWeaDim);
            for (int i = 0; i < kWeaDim; ++i)
                for (int j = 0; j < kWeaDim; ++j) sub(i, j) = two->states[k](kWeaEmbedding[i], kWeaEmbedding[j]);
            for (const auto& f : setup.observables) row.push_back(f(sub));
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline ResultTable run_spectrum(const Scenario& s, int jobs) {
    const Liouvillian L = full_liouvillian(s.params);
    const auto anchor = stationary_anchor(L, full_initial(s), 200.0, s.tol);
    const auto taus = delay_grid_for(L);
    const auto corr = regression_correlation(L, anchor.state, taus, s.tol);
    const auto omegas = s.omegas.points();

    // Frequencies are independent; split them into contiguous blocks.
    const std::size_t blocks = std::min<std::size_t>(omegas.size(), static_cast<std::size_t>(std::max(jobs, 1)));
    std::vector<double> values(omegas.size());
    parallel_for(blocks, jobs, [&](std::size_t b) {
        const std::size_t lo = omegas.size() * b / blocks, hi = omegas.size() * (b + 1) / blocks;
        const auto part = cavity_spectrum(corr, std::span<const double>(omegas.data() + lo, hi - lo));
        std::copy(part.values.begin(), part.values.end(), values.begin() + lo);
    });

    ResultTable t;
    common_meta(t, s);
    t.meta("anchor", anchor.from_steady_state ? "steady state" : "state at t=200");
    t.meta("anchor_residual", format_real(anchor.residual));
    if (corr.warning) t.meta("warning", *corr.warning);
    t.meta("tau_max", format_real(taus.back()));
    t.meta("tau_samples", std::to_string(taus.size()));
    t.meta("mean_photon_number", format_real(corr.values.front().real()));
    t.meta("coherent_part", format_real(corr.coherent_part.real()));
    std::string q;
    for (double e : quasienergies(driven_hamiltonian(s.params))) q += (q.empty() ? "" : " ") + format_real(e);
    t.meta("quasienergies", q);
    t.columns = {"omega", "S"};
    for (std::size_t k = 0; k < omegas.size(); ++k) t.add_row({omegas[k], values[k]});
    return t;
}

inline ResultTable run_quasienergies(const Scenario& s) {
    ResultTable t;
    common_meta(t, s);
    t.columns = {"index", "E", "E_over_g"};
    const auto e = quasienergies(driven_hamiltonian(s.params));
    for (std::size_t k = 0; k < e.size(); ++k)
        t.add_row({static_cast<double>(k), e[k], s.params.g != 0.0 ? e[k] / s.params.g : std::nan("")});
    return t;
}

}  // namespace detail

/// Steady (or long-time) observables of `s` for each value of `axis`.
inline ResultTable sweep(const Scenario& base, const std::string& axis, const std::vector<double>& values, int jobs) {
    if (base.mode == Mode::quasienergies) throw ConfigError("sweep: quasienergies scenarios have no steady state");
    if (values.empty()) throw ConfigError("sweep: no values given");
    std::vector<Scenario> points;
    for (double v : values) {
        Scenario s = base;
        set_param(s.params, axis, v);
        validate(s);
        points.push_back(std::move(s));
    }
    std::vector<std::vector<double>> rows(values.size());
    std::vector<char> unique(values.size());
    parallel_for(values.size(), jobs, [&](std::size_t i) {
        const auto setup = model_setup(points[i]);
        const auto lt = long_time_state(setup.L, setup.initial);
        unique[i] = lt.unique;
        rows[i].push_back(values[i]);
        for (const auto& f : setup.observables) rows[i].push_back(f(lt.state.matrix()));
    });

    ResultTable t;
    detail::common_meta(t, base);
    t.meta("sweep_axis", axis);
    const auto degenerate = std::count(unique.begin(), unique.end(), 0);
    t.meta("degenerate_points", std::to_string(degenerate));
    if (degenerate) t.meta("note", "degenerate steady states replaced by the long-time limit of the initial state");
    t.columns.push_back(axis);
    for (const auto& o : base.outputs) t.columns.push_back(o);
    for (auto& r : rows) t.add_row(std::move(r));
    return t;
}

inline ResultTable run_scenario(const Scenario& s, int jobs = 1) {
    validate(s);
    const auto start = std::chrono::steady_clock::now();
    ResultTable t;
    switch (s.mode) {
        case Mode::wea_vacuum:
        case Mode::wea_newbasis:
        case Mode::wea_probe:
        case Mode::full: t = detail::run_time_domain(s); break;
        case Mode::spectrum: t = detail::run_spectrum(s, jobs); break;
        case Mode::quasienergies: t = detail::run_quasienergies(s); break;
        case Mode::steady_sweep: {
            Scenario q = s;
            t = sweep(q, "delta", s.deltas.points(), jobs);
            break;
        }
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    t.meta("wall_time_s", detail::format_real(wall));
    return t;
}

}  // namespace vic
