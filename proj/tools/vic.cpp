// Command-line front end: runs the built-in figure presets or flat config
// files and writes CSV (plus a gnuplot script when --out is given).
//
// Exit codes: 0 success, 2 configuration/schema error, 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "vic/runner.hpp"

namespace {

using namespace vic;

struct Overrides {
    std::optional<double> g, gamma, Delta, delta, G;
    std::optional<int> N;
    std::optional<std::string> omega_alpha, omega_beta, omega;
    bool antisym = false;
    std::optional<double> tol;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--g", o.g, "cavity-emitter coupling (units of kappa)");
    cmd->add_option("--gamma", o.gamma, "emitter decay, both transitions");
    cmd->add_option("--Delta", o.Delta, "cavity-emitter detuning");
    cmd->add_option("--delta", o.delta, "drive detuning");
    cmd->add_option("--G", o.G, "probe amplitude, both transitions");
    cmd->add_option("--N", o.N, "number of cavity Fock states");
    cmd->add_option("--omega-alpha", o.omega_alpha, "drive on g-alpha; a trailing 'g' scales by g (e.g. 0.5g)");
    cmd->add_option("--omega-beta", o.omega_beta, "drive on g-beta; accepts the same 'g' suffix");
    cmd->add_option("--omega", o.omega, "drive amplitude on g-alpha (with --antisym also -omega on g-beta)");
    cmd->add_flag("--antisym", o.antisym, "set omega_beta = -omega_alpha");
    cmd->add_option("--tol", o.tol, "integrator relative tolerance");
}

double scaled(const std::string& flag, const std::string& text, double g) {
    std::string t = text;
    double factor = 1.0;
    if (!t.empty() && t.back() == 'g') {
        t.pop_back();
        factor = g;
    }
    return factor * vic::detail::parse_real(flag, t);
}

void apply(Scenario& s, const Overrides& o) {
    auto& p = s.params;
    if (o.g) p.g = *o.g;
    if (o.gamma) p.gamma1 = p.gamma2 = *o.gamma;
    if (o.Delta) p.Delta = *o.Delta;
    if (o.delta) p.delta = *o.delta;
    if (o.G) p.G1 = p.G2 = *o.G;
    if (o.N) p.N = *o.N;
    if (o.omega) p.omega_alpha = scaled("--omega", *o.omega, p.g);
    if (o.omega_alpha) p.omega_alpha = scaled("--omega-alpha", *o.omega_alpha, p.g);
    if (o.omega_beta) p.omega_beta = scaled("--omega-beta", *o.omega_beta, p.g);
    if (o.antisym) p.omega_beta = -p.omega_alpha;
    if (o.tol) s.tol = *o.tol;
}

Scenario load(const std::string& target) {
    if (auto preset = find_preset(target)) return *preset;
    if (std::filesystem::is_regular_file(target)) {
        std::ifstream in(target);
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }
    std::string names;
    for (const auto& s : builtin_scenarios()) names += " " + s.name;
    throw ConfigError("'" + target + "' is neither a preset nor a readable config file; presets:" + names);
}

void emit(const ResultTable& t, const std::string& out, const std::string& title) {
    if (out.empty() || out == "-") {
        write_csv(std::cout, t);
        return;
    }
    {
        std::ofstream f(out, std::ios::binary);
        if (!f) throw ConfigError("--out: cannot open '" + out + "' for writing");
        write_csv(f, t);
    }
    const std::filesystem::path gp = std::filesystem::path(out).replace_extension(".gp");
    std::ofstream g(gp, std::ios::binary);
    g << gnuplot_script(t, std::filesystem::path(out).filename().string(), title);
    std::cerr << "wrote " << out << " and " << gp.string() << "\n";
}

std::vector<double> parse_values(const std::string& text) { return vic::detail::parse_grid("--values", text).points(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cavity QED simulator for a V-type emitter: vacuum-induced coherence and dark states"};
    app.require_subcommand(1);

    std::string target, out, axis, values;
    int jobs = default_jobs();
    Overrides o;

    auto* run = app.add_subcommand("run", "run a preset (fig2a..fig8b, or a bare family like fig2) or config file");
    run->add_option("target", target, "preset name or config path")->required();

    auto* sw = app.add_subcommand("sweep", "steady/long-time observables over one parameter axis");
    sw->add_option("target", target, "preset name or config path")->required();
    sw->add_option("--axis", axis, "parameter to sweep (g, gamma, gamma1, ..., delta, N)")->required();
    sw->add_option("--values", values, "comma list or start:stop:count")->required();

    auto* qe = app.add_subcommand("quasienergies", "eigenvalues of the driven Hamiltonian");
    qe->add_option("target", target, "optional preset or config supplying parameters");

    auto* sp = app.add_subcommand("spectrum", "cavity-emitted spectrum of a scenario");
    sp->add_option("target", target, "preset name or config path")->required();
    std::string omegas;
    sp->add_option("--omegas", omegas, "frequency grid (start:stop:count or list)");

    auto* st = app.add_subcommand("steady", "steady (or long-time) observables of a scenario");
    st->add_option("target", target, "preset name or config path")->required();

    for (auto* cmd : {run, sw, qe, sp, st}) {
        add_override_flags(cmd, o);
        cmd->add_option("--out", out, "output CSV path (default stdout)");
        cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        ResultTable table;
        Scenario s;
        if (qe->parsed()) {
            if (!target.empty()) s = load(target);
            s.name = target.empty() ? "quasienergies" : s.name;
            if (target.empty()) s.params.g = 2.0;
            s.mode = Mode::quasienergies;
            apply(s, o);
            table = run_scenario(s, jobs);
        } else {
            s = load(target);
            apply(s, o);
            if (run->parsed()) {
                table = run_scenario(s, jobs);
            } else if (sw->parsed()) {
                validate(s);
                table = sweep(s, axis, parse_values(values), jobs);
            } else if (sp->parsed()) {
                s.mode = Mode::spectrum;
                if (!omegas.empty()) s.omegas = vic::detail::parse_grid("--omegas", omegas);
                if (s.omegas.empty()) s.omegas = Grid::linspace(-4.0, 4.0, 801);
                s.outputs = {"S"};
                table = run_scenario(s, jobs);
            } else if (st->parsed()) {
                if (s.mode == Mode::quasienergies || s.mode == Mode::spectrum) {
                    throw ConfigError("mode: steady needs a time-domain or steady-sweep scenario");
                }
                validate(s);
                const auto setup = model_setup(s);
                const auto lt = long_time_state(setup.L, setup.initial);
                vic::detail::common_meta(table, s);
                table.meta("steady_state", lt.unique ? "unique" : "degenerate; long-time limit of the initial state");
                table.columns = s.outputs;
                std::vector<double> row;
                for (const auto& f : setup.observables) row.push_back(f(lt.state.matrix()));
                table.add_row(std::move(row));
            }
        }
        emit(table, out, s.name);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedConfiguration& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const vic::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
