#pragma once

// Single-excitation (weak excitation) reduction on the four states
//   psi1 = |alpha,0>, psi2 = |beta,0>, psi3 = |g,1>, psi4 = |g,0>
// and the bright/dark basis
//   phi1 = (psi1 + psi2)/sqrt2, phi2 = (psi1 - psi2)/sqrt2, phi3 = psi3, phi4 = psi4.
//
// The generator is obtained by restricting the N = 2 Lindblad superoperator
// to this subspace. Probe modes drive the g-alpha and g-beta transitions with
// amplitudes G1, G2 entering the Hamiltonian as -G (sigma_g. + sigma_.g),
// which reproduces the conventional probe equations with +iG rho_{psi4 psi1}
// feeding rho_{psi1 psi1}.

#include <array>
#include <cmath>
#include <string>

#include "vic/liouville.hpp"

namespace vic {

enum class WeaMode { vacuum, new_basis_vacuum, probe, new_basis_probe };

inline std::string to_string(WeaMode m) {
    switch (m) {
        case WeaMode::vacuum: return "vacuum";
        case WeaMode::new_basis_vacuum: return "new-basis-vacuum";
        case WeaMode::probe: return "probe";
        case WeaMode::new_basis_probe: return "new-basis-probe";
    }
    return "?";
}

inline constexpr int kWeaDim = 4;

/// Positions of psi1..psi4 inside the N = 2 composite basis (level * 2 + n).
inline constexpr std::array<int, kWeaDim> kWeaEmbedding = {2, 4, 1, 0};

inline SpaceLabel wea_space() { return SpaceLabel::plain(kWeaDim); }

/// 4x4 density matrix on {psi1, psi2, psi3, psi4} (or the phi basis).
class WeaState {
public:
    explicit WeaState(Matrix rho) : rho_(std::move(rho)) {
        if (rho_.rows() != kWeaDim || rho_.cols() != kWeaDim) throw InvalidDimension("WeaState must be 4x4");
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidState("WeaState is not Hermitian");
        if (std::abs(rho_.trace() - Complex(1.0)) > 1e-10) throw InvalidState("WeaState trace differs from 1");
        for (int i = 0; i < kWeaDim; ++i) {
            const double p = rho_(i, i).real();
            if (p < -1e-9 || p > 1.0 + 1e-9) throw InvalidState("WeaState population outside [0, 1]");
        }
    }

    static WeaState projector(int index) {
        Matrix m = Matrix::Zero(kWeaDim, kWeaDim);
        m(index, index) = 1.0;
        return WeaState(std::move(m));
    }

    const Matrix& matrix() const { return rho_; }
    Complex operator()(int i, int j) const { return rho_(i, j); }

private:
    Matrix rho_;
};

/// Unitary whose columns are phi1..phi4 expressed in the psi basis.
inline Matrix new_basis_unitary() {
    const double s = 1.0 / std::sqrt(2.0);
    Matrix u = Matrix::Zero(kWeaDim, kWeaDim);
    u(0, 0) = s;
    u(1, 0) = s;
    u(0, 1) = s;
    u(1, 1) = -s;
    u(2, 2) = 1.0;
    u(3, 3) = 1.0;
    return u;
}

inline Matrix to_new_basis(const Matrix& rho_psi) {
    const Matrix u = new_basis_unitary();
    return u.adjoint() * rho_psi * u;
}

inline Matrix from_new_basis(const Matrix& rho_phi) {
    const Matrix u = new_basis_unitary();
    return u * rho_phi * u.adjoint();
}

inline WeaState to_new_basis(const WeaState& s) { return WeaState(to_new_basis(s.matrix())); }
inline WeaState from_new_basis(const WeaState& s) { return WeaState(from_new_basis(s.matrix())); }

/// Hamiltonian and channels of the N = 2 model whose restriction defines `mode`.
inline std::pair<OperatorMatrix, std::vector<Dissipator>> wea_parent_model(WeaMode mode, const SystemParams& p) {
    const bool new_basis = mode == WeaMode::new_basis_vacuum || mode == WeaMode::new_basis_probe;
    if (new_basis && p.gamma1 != p.gamma2) {
        throw UnsupportedConfiguration("bright/dark basis equations require gamma1 == gamma2");
    }
    if (new_basis && p.Delta != 0.0) {
        throw UnsupportedConfiguration("bright/dark basis equations are only defined for Delta = 0");
    }
    SystemParams q = p;
    q.N = 2;
    const bool probe = mode == WeaMode::probe || mode == WeaMode::new_basis_probe;
    if (probe) {
        q.omega_alpha = -p.G1;
        q.omega_beta = -p.G2;
        return {driven_hamiltonian(q), dissipators(q)};
    }
    return {vacuum_hamiltonian(q), dissipators(q)};
}

/// 16x16 generator of the reduced model acting on column-major vec(rho).
class WeaGenerator {
public:
    WeaGenerator(WeaMode mode, const SystemParams& p) : mode_(mode), matrix_(kWeaDim * kWeaDim, kWeaDim * kWeaDim) {
        const auto [H, ds] = wea_parent_model(mode, p);
        const Liouvillian full = build_liouvillian(H, ds);
        const int d = full.dimension();
        for (int i = 0; i < kWeaDim; ++i)
            for (int j = 0; j < kWeaDim; ++j)
                for (int k = 0; k < kWeaDim; ++k)
                    for (int l = 0; l < kWeaDim; ++l)
                        matrix_(i + kWeaDim * j, k + kWeaDim * l) =
                            full.matrix()(kWeaEmbedding[i] + d * kWeaEmbedding[j],
                                          kWeaEmbedding[k] + d * kWeaEmbedding[l]);
        if (mode == WeaMode::new_basis_vacuum || mode == WeaMode::new_basis_probe) {
            const Matrix u = new_basis_unitary();
            const Matrix s = kron(u.conjugate(), u);  // vec(u X u^dag) = s vec(X)
            matrix_ = s.adjoint() * matrix_ * s;
        }
    }

    WeaMode mode() const { return mode_; }
    const Matrix& matrix() const { return matrix_; }

    Matrix rhs(const Matrix& rho) const { return unvec(matrix_ * vec(rho), kWeaDim); }

    Liouvillian liouvillian() const { return {wea_space(), matrix_}; }

private:
    WeaMode mode_;
    Matrix matrix_;
};

inline Matrix wea_rhs(WeaMode mode, const SystemParams& p, const WeaState& rho) {
    return WeaGenerator(mode, p).rhs(rho.matrix());
}

inline Trajectory wea_evolve(WeaMode mode, const SystemParams& p, const WeaState& rho0, std::span<const double> times,
                             double tol = kDefaultTolerance) {
    const WeaGenerator gen(mode, p);
    return evolve(gen.liouvillian(), DensityMatrix(wea_space(), rho0.matrix()), times, tol);
}

/// Named matrix elements rhoIJ (1-based, as in rho11, rho12, ...) of a
/// reduced trajectory.
inline TimeSeries wea_series(const Trajectory& tr) {
    TimeSeries ts;
    ts.times = tr.times;
    for (int i = 0; i < kWeaDim; ++i)
        for (int j = i; j < kWeaDim; ++j) {
            auto& col = ts.observables["rho" + std::to_string(i + 1) + std::to_string(j + 1)];
            for (const auto& m : tr.states) col.push_back(m(i, j));
        }
    return ts;
}

/// <a^dag a> within the single-excitation manifold.
inline double wea_mean_photon(const WeaState& rho) { return rho(2, 2).real(); }

/// Embeds a reduced state into the N = 2 composite space.
inline DensityMatrix embed_wea_state(const WeaState& rho) {
    Matrix full = Matrix::Zero(2 * kAtomDim, 2 * kAtomDim);
    for (int i = 0; i < kWeaDim; ++i)
        for (int j = 0; j < kWeaDim; ++j) full(kWeaEmbedding[i], kWeaEmbedding[j]) = rho(i, j);
    return {SpaceLabel::composite(2), std::move(full)};
}

}  // namespace vic
