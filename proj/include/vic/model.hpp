#pragma once

// Hamiltonians and Lindblad channels for the V-type emitter in a lossy cavity.
// All rates and detunings are in units of the cavity decay constant kappa.
//
// kappa, gamma1 and gamma2 are half-decay rates: the corresponding
// standard-form Lindblad rates are 2*kappa, 2*gamma1 and 2*gamma2.

#include <cmath>
#include <string>
#include <vector>

#include "vic/hilbert.hpp"

namespace vic {

struct SystemParams {
    double g = 0.0;
    double kappa = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double Delta = 0.0;  // atom-cavity detuning
    double delta = 0.0;  // drive/probe detuning
    double omega_alpha = 0.0;
    double omega_beta = 0.0;
    double G1 = 0.0;  // weak-probe amplitudes of the reduced model
    double G2 = 0.0;
    int N = 2;  // cavity Fock truncation

    bool operator==(const SystemParams&) const = default;

    void validate() const {
        const double rates[] = {g, kappa, gamma1, gamma2, Delta, delta, omega_alpha, omega_beta, G1, G2};
        for (double r : rates) {
            if (!std::isfinite(r)) throw InvalidState("system parameters must be finite");
        }
        if (!(kappa > 0.0)) throw InvalidState("kappa must be positive");
        if (gamma1 < 0.0 || gamma2 < 0.0) throw InvalidState("atomic decay rates must be non-negative");
        if (N < 1) throw InvalidDimension("cavity truncation N must be >= 1");
    }
};

struct Dissipator {
    double rate = 0.0;
    OperatorMatrix jump;
};

namespace detail {

struct CompositeOps {
    OperatorMatrix a;       // I (x) a
    OperatorMatrix n;       // I (x) a^dag a
    OperatorMatrix A_ga;    // |g><alpha| (x) I
    OperatorMatrix A_gb;    // |g><beta| (x) I
    OperatorMatrix excited; // (|alpha><alpha| + |beta><beta|) (x) I
};

inline CompositeOps composite_ops(int n_states) {
    const OperatorMatrix a = fock_annihilation(n_states);
    return {embed_cavity(a), embed_cavity(a.adjoint() * a),
            embed_atom(atomic_transition(Level::g, Level::alpha), n_states),
            embed_atom(atomic_transition(Level::g, Level::beta), n_states),
            embed_atom(atomic_transition(Level::alpha, Level::alpha) + atomic_transition(Level::beta, Level::beta),
                       n_states)};
}

// -g (A_ga a^dag + A_gb a^dag) + H.c.
inline OperatorMatrix cavity_coupling(const CompositeOps& ops, double g, bool couple_beta) {
    OperatorMatrix lowering = ops.A_ga * ops.a.adjoint();
    if (couple_beta) lowering = lowering + ops.A_gb * ops.a.adjoint();
    const OperatorMatrix v = (-g) * lowering;
    return v + v.adjoint();
}

}  // namespace detail

/// Cavity-frame Hamiltonian H/hbar = -Delta (A_aa + A_bb) - g (A_ga + A_gb) a^dag + H.c.
inline OperatorMatrix vacuum_hamiltonian(const SystemParams& p) {
    p.validate();
    const auto ops = detail::composite_ops(p.N);
    return (-p.Delta) * ops.excited + detail::cavity_coupling(ops, p.g, true);
}

/// Laser-frame Hamiltonian with direct drives Omega_alpha, Omega_beta.
///
/// The excited levels sit at -delta and the cavity photon at Delta - delta,
/// so that the undriven case with delta = Delta reproduces vacuum_hamiltonian
/// and the probe coherences rotate as i*delta*rho_{psi1 psi4}.
inline OperatorMatrix driven_hamiltonian(const SystemParams& p) {
    p.validate();
    const auto ops = detail::composite_ops(p.N);
    const OperatorMatrix drive_a = ops.A_ga + ops.A_ga.adjoint();
    const OperatorMatrix drive_b = ops.A_gb + ops.A_gb.adjoint();
    return p.omega_alpha * drive_a + p.omega_beta * drive_b + (p.Delta - p.delta) * ops.n +
           (-p.delta) * ops.excited + detail::cavity_coupling(ops, p.g, true);
}

/// Vacuum Hamiltonian with |beta> decoupled from the cavity.
inline OperatorMatrix two_level_variant(const SystemParams& p) {
    p.validate();
    const auto ops = detail::composite_ops(p.N);
    return (-p.Delta) * ops.excited + detail::cavity_coupling(ops, p.g, false);
}

/// Cavity loss (rate 2 kappa, jump a) and atomic decay (rates 2 gamma1,
/// 2 gamma2, jumps A_ga, A_gb). Zero-rate channels are omitted.
inline std::vector<Dissipator> dissipators(const SystemParams& p, bool include_cavity = true,
                                           bool include_atoms = true) {
    p.validate();
    const auto ops = detail::composite_ops(p.N);
    std::vector<Dissipator> out;
    if (include_cavity) out.push_back({2.0 * p.kappa, ops.a});
    if (include_atoms) {
        if (p.gamma1 > 0.0) out.push_back({2.0 * p.gamma1, ops.A_ga});
        if (p.gamma2 > 0.0) out.push_back({2.0 * p.gamma2, ops.A_gb});
    }
    return out;
}

/// Total excitation number A_aa + A_bb + a^dag a.
inline OperatorMatrix excitation_number(int n_states) {
    const auto ops = detail::composite_ops(n_states);
    return ops.excited + ops.n;
}

inline OperatorMatrix cavity_annihilation(int n_states) { return detail::composite_ops(n_states).a; }
inline OperatorMatrix photon_number(int n_states) { return detail::composite_ops(n_states).n; }
inline OperatorMatrix level_population(Level level, int n_states) {
    return embed_atom(atomic_transition(level, level), n_states);
}

}  // namespace vic
