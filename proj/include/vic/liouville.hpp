#pragma once

// Lindblad generator in superoperator form, time propagation, steady states
// and Hamiltonian eigenanalysis.
//
// Vectorization is column-major: vec(X)[i + d*j] = X(i, j), so that
// vec(A X B) = (B^T (x) A) vec(X).

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vic/integrator.hpp"
#include "vic/model.hpp"

namespace vic {

inline Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

inline Matrix unvec(const Vector& v, Eigen::Index d) { return Eigen::Map<const Matrix>(v.data(), d, d); }

class Liouvillian {
public:
    Liouvillian(SpaceLabel space, Matrix matrix) : space_(space), matrix_(std::move(matrix)) {
        const Eigen::Index d = space_.dimension();
        if (matrix_.rows() != d * d || matrix_.cols() != d * d) {
            throw InvalidDimension("superoperator size does not match space " + describe(space_));
        }
    }

    const SpaceLabel& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    int dimension() const { return space_.dimension(); }

    Matrix apply(const Matrix& rho) const { return unvec(matrix_ * vec(rho), dimension()); }

private:
    SpaceLabel space_;
    Matrix matrix_;
};

/// L(rho) = -i[H, rho] + sum_k rate_k (c rho c^dag - 1/2 {c^dag c, rho}).
inline Liouvillian build_liouvillian(const OperatorMatrix& H, const std::vector<Dissipator>& ds) {
    const Eigen::Index d = H.dimension();
    const Matrix I = Matrix::Identity(d, d);
    const Complex minus_i(0.0, -1.0);
    Matrix L = minus_i * (kron(I, H.matrix()) - kron(H.matrix().transpose(), I));
    for (const auto& dis : ds) {
        if (!(dis.jump.space() == H.space())) {
            throw SpaceMismatch("dissipator on " + describe(dis.jump.space()) + " but Hamiltonian on " +
                                describe(H.space()));
        }
        if (dis.rate < 0.0) throw InvalidState("dissipator rate must be non-negative");
        const Matrix& c = dis.jump.matrix();
        const Matrix cdc = c.adjoint() * c;
        L += dis.rate * (kron(c.conjugate(), c) - 0.5 * kron(I, cdc) - 0.5 * kron(cdc.transpose(), I));
    }
    return {H.space(), std::move(L)};
}

/// Applies the Lindblad generator directly, without forming the superoperator.
inline Matrix lindblad_rhs(const OperatorMatrix& H, const std::vector<Dissipator>& ds, const Matrix& rho) {
    const Complex minus_i(0.0, -1.0);
    Matrix out = minus_i * (H.matrix() * rho - rho * H.matrix());
    for (const auto& dis : ds) {
        const Matrix& c = dis.jump.matrix();
        const Matrix cdc = c.adjoint() * c;
        out += dis.rate * (c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc));
    }
    return out;
}

struct TimeSeries {
    std::vector<double> times;
    std::map<std::string, std::vector<Complex>> observables;

    const std::vector<Complex>& operator[](const std::string& name) const {
        auto it = observables.find(name);
        if (it == observables.end()) throw InvalidState("no observable named '" + name + "'");
        return it->second;
    }

    std::vector<double> real(const std::string& name) const {
        const auto& v = (*this)[name];
        std::vector<double> out(v.size());
        std::transform(v.begin(), v.end(), out.begin(), [](Complex c) { return c.real(); });
        return out;
    }
};

/// Propagated states on the output grid plus per-sample physicality
/// diagnostics. States are never renormalized.
struct Trajectory {
    SpaceLabel space;
    std::vector<double> times;
    std::vector<Matrix> states;
    std::vector<double> trace_drift;
    std::vector<double> hermiticity_residue;
    std::vector<double> min_eigenvalue;
    IntegratorStats stats;

    double max_trace_drift() const { return max_of(trace_drift); }
    double max_hermiticity_residue() const { return max_of(hermiticity_residue); }
    double lowest_eigenvalue() const {
        return min_eigenvalue.empty() ? 0.0 : *std::min_element(min_eigenvalue.begin(), min_eigenvalue.end());
    }

private:
    static double max_of(const std::vector<double>& v) {
        return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    }
};

inline IntegratorOptions options_for_tolerance(double tol) {
    if (!(tol > 0.0)) throw InvalidState("integration tolerance must be positive");
    IntegratorOptions opt;
    opt.rtol = tol;
    opt.atol = tol * 1e-3;
    return opt;
}

inline constexpr double kDefaultTolerance = 1e-9;

/// Propagates an arbitrary (not necessarily Hermitian) operator X under
/// dX/dt = L(X).
inline std::vector<Matrix> propagate(const Liouvillian& L, const Matrix& x0, std::span<const double> times,
                                     const IntegratorOptions& opt, IntegratorStats* stats = nullptr) {
    const Eigen::Index d = L.dimension();
    if (x0.rows() != d || x0.cols() != d) throw SpaceMismatch("initial operator does not match Liouvillian space");
    const Matrix& M = L.matrix();
    auto rhs = [&M](double, const Vector& y) -> Vector {
        Vector out(y.size());
        out.noalias() = M * y;
        return out;
    };
    auto ys = integrate_dopri5(rhs, vec(x0), times, opt, stats);
    std::vector<Matrix> out;
    out.reserve(ys.size());
    for (const auto& y : ys) out.push_back(unvec(y, d));
    return out;
}

inline Trajectory evolve(const Liouvillian& L, const DensityMatrix& rho0, std::span<const double> times,
                         double tol = kDefaultTolerance) {
    if (!(rho0.space() == L.space())) throw SpaceMismatch("initial state does not match Liouvillian space");
    Trajectory tr;
    tr.space = L.space();
    tr.times.assign(times.begin(), times.end());
    tr.states = propagate(L, rho0.matrix(), times, options_for_tolerance(tol), &tr.stats);
    for (const auto& rho : tr.states) {
        tr.trace_drift.push_back(std::abs(rho.trace() - Complex(1.0)));
        tr.hermiticity_residue.push_back((rho - rho.adjoint()).cwiseAbs().maxCoeff());
        const Matrix herm = 0.5 * (rho + rho.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(herm, Eigen::EigenvaluesOnly);
        tr.min_eigenvalue.push_back(es.eigenvalues().minCoeff());
    }
    return tr;
}

inline Complex expectation(const Matrix& rho, const Matrix& op) { return (op * rho).trace(); }

inline Complex expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
    if (!(rho.space() == op.space())) throw SpaceMismatch("expectation of operator on a different space");
    return expectation(rho.matrix(), op.matrix());
}

inline TimeSeries observe(const Trajectory& tr, const std::vector<std::pair<std::string, OperatorMatrix>>& ops) {
    TimeSeries ts;
    ts.times = tr.times;
    for (const auto& [name, op] : ops) {
        if (!(op.space() == tr.space)) throw SpaceMismatch("observable '" + name + "' is on a different space");
        auto& col = ts.observables[name];
        col.reserve(tr.states.size());
        for (const auto& rho : tr.states) col.push_back(expectation(rho, op.matrix()));
    }
    return ts;
}

struct SteadyState {
    DensityMatrix state;
    double residual;         // max |L(rho)|
    int kernel_dimension;    // numerically detected
};

namespace detail {

inline constexpr double kKernelThreshold = 1e-8;

struct Kernel {
    Matrix basis;  // columns span the numerical null space
    Eigen::VectorXd singular_values;
    Vector smallest;  // right singular vector of the smallest singular value
};

inline Kernel null_space(const Matrix& m) {
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cut = kKernelThreshold * std::max(s(0), 1e-300);
    int dim = 0;
    for (Eigen::Index i = s.size() - 1; i >= 0 && s(i) < cut; --i) ++dim;
    return {svd.matrixV().rightCols(dim), s, svd.matrixV().col(svd.matrixV().cols() - 1)};
}

inline DensityMatrix to_density(SpaceLabel space, Matrix rho) {
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    return {space, std::move(rho)};
}

}  // namespace detail

/// Unique steady state from the null space of L (smallest singular vector),
/// normalized to unit trace. Throws DegenerateSteadyState if the kernel is
/// more than one-dimensional.
inline SteadyState steady_state(const Liouvillian& L) {
    const auto k = detail::null_space(L.matrix());
    const int dim = static_cast<int>(k.basis.cols());
    if (dim > 1) {
        std::ostringstream msg;
        msg << "steady state is not unique: Liouvillian kernel dimension " << dim;
        throw DegenerateSteadyState(msg.str(), dim);
    }
    const Matrix raw = unvec(k.smallest, L.dimension());
    if (std::abs(raw.trace()) < 1e-12) throw InvalidState("null vector of L is traceless; no valid steady state");
    DensityMatrix rho = detail::to_density(L.space(), raw);
    const double residual = L.apply(rho.matrix()).cwiseAbs().maxCoeff();
    return {std::move(rho), residual, std::max(dim, 1)};
}

/// Long-time limit of exp(L t) rho0, computed as the spectral projection of
/// rho0 onto the kernel of L. Works when the kernel is degenerate.
inline DensityMatrix asymptotic_state(const Liouvillian& L, const DensityMatrix& rho0) {
    if (!(rho0.space() == L.space())) throw SpaceMismatch("initial state does not match Liouvillian space");
    const auto right = detail::null_space(L.matrix());
    const auto left = detail::null_space(L.matrix().adjoint());
    if (right.basis.cols() == 0 || right.basis.cols() != left.basis.cols()) {
        throw InvalidState("could not resolve the Liouvillian kernel");
    }
    const Matrix overlap = left.basis.adjoint() * right.basis;
    const Vector coeffs = overlap.fullPivLu().solve(left.basis.adjoint() * vec(rho0.matrix()));
    return detail::to_density(L.space(), unvec(right.basis * coeffs, L.dimension()));
}

/// Ascending real eigenvalues of a Hermitian Hamiltonian.
inline std::vector<double> quasienergies(const OperatorMatrix& H) {
    const Matrix& m = H.matrix();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw InvalidState("quasienergies require a Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

/// Smallest nonzero decay rate of L: min |Re lambda| over eigenvalues with a
/// resolvable real part. Undamped oscillating modes are skipped along with
/// the kernel.
inline double spectral_gap(const Liouvillian& L) {
    Eigen::ComplexEigenSolver<Matrix> es(L.matrix(), false);
    const auto& ev = es.eigenvalues();
    const double scale = ev.cwiseAbs().maxCoeff();
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i).real()) <= 1e-9 * std::max(scale, 1.0)) continue;
        gap = std::min(gap, std::abs(ev(i).real()));
    }
    return gap;
}

}  // namespace vic
