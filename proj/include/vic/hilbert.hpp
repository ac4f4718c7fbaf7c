#pragma once

// Composite Hilbert space of a V-type three-level emitter and one truncated
// cavity mode.
//
// Atomic level ordering is fixed everywhere as (g, alpha, beta) = (0, 1, 2).
// The cavity keeps Fock states |0> ... |N-1>. Composite operators are built
// as atom (x) cavity, so the basis state |level, n> sits at index
// level * N + n.

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <string_view>

#include "vic/error.hpp"

namespace vic {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kAtomDim = 3;

enum class Level : int { g = 0, alpha = 1, beta = 2 };

inline Level parse_level(std::string_view name) {
    if (name == "g") return Level::g;
    if (name == "alpha" || name == "a") return Level::alpha;
    if (name == "beta" || name == "b") return Level::beta;
    throw UnknownLevel("unknown atomic level '" + std::string(name) + "' (expected g, alpha, beta)");
}

inline int index_of(Level level) { return static_cast<int>(level); }

/// Which factor of atom (x) cavity an operator acts on. `plain` is an
/// unlabeled square space used for generic Kronecker products.
enum class Factor { atom, cavity, composite, plain };

struct SpaceLabel {
    Factor factor = Factor::composite;
    int cavity_dim = 1;
    int plain_dim = 0;

    static SpaceLabel atom() { return {Factor::atom, 1, 0}; }
    static SpaceLabel cavity(int n) {
        if (n < 1) throw InvalidDimension("cavity dimension must be >= 1, got " + std::to_string(n));
        return {Factor::cavity, n, 0};
    }
    static SpaceLabel composite(int n) {
        if (n < 1) throw InvalidDimension("cavity dimension must be >= 1, got " + std::to_string(n));
        return {Factor::composite, n, 0};
    }
    static SpaceLabel plain(int dim) {
        if (dim < 1) throw InvalidDimension("dimension must be >= 1, got " + std::to_string(dim));
        return {Factor::plain, 1, dim};
    }

    int dimension() const {
        switch (factor) {
            case Factor::atom: return kAtomDim;
            case Factor::cavity: return cavity_dim;
            case Factor::composite: return kAtomDim * cavity_dim;
            case Factor::plain: return plain_dim;
        }
        return 0;
    }

    bool operator==(const SpaceLabel&) const = default;
};

inline std::string describe(const SpaceLabel& s) {
    switch (s.factor) {
        case Factor::atom: return "atom(3)";
        case Factor::cavity: return "cavity(" + std::to_string(s.cavity_dim) + ")";
        case Factor::composite: return "atom(3)xcavity(" + std::to_string(s.cavity_dim) + ")";
        case Factor::plain: return "plain(" + std::to_string(s.plain_dim) + ")";
    }
    return "?";
}

/// Dense complex square matrix tagged with the space it acts on.
class OperatorMatrix {
public:
    OperatorMatrix(SpaceLabel space, Matrix entries) : space_(space), entries_(std::move(entries)) {
        const int d = space_.dimension();
        if (entries_.rows() != d || entries_.cols() != d) {
            throw InvalidDimension("operator of size " + std::to_string(entries_.rows()) + "x" +
                                   std::to_string(entries_.cols()) + " does not match space " +
                                   describe(space_));
        }
    }

    static OperatorMatrix identity(SpaceLabel space) {
        const int d = space.dimension();
        return {space, Matrix::Identity(d, d)};
    }
    static OperatorMatrix zero(SpaceLabel space) {
        const int d = space.dimension();
        return {space, Matrix::Zero(d, d)};
    }

    const SpaceLabel& space() const { return space_; }
    const Matrix& matrix() const { return entries_; }
    int dimension() const { return static_cast<int>(entries_.rows()); }
    Complex operator()(int row, int col) const { return entries_(row, col); }

    OperatorMatrix adjoint() const { return {space_, entries_.adjoint()}; }

    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        require_same(a, b, "product");
        return {a.space_, a.entries_ * b.entries_};
    }
    friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
        require_same(a, b, "sum");
        return {a.space_, a.entries_ + b.entries_};
    }
    friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
        require_same(a, b, "difference");
        return {a.space_, a.entries_ - b.entries_};
    }
    friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a) { return {a.space_, s * a.entries_}; }
    friend OperatorMatrix operator*(double s, const OperatorMatrix& a) { return {a.space_, s * a.entries_}; }

    static void require_same(const OperatorMatrix& a, const OperatorMatrix& b, const char* what) {
        if (!(a.space_ == b.space_)) {
            throw SpaceMismatch(std::string(what) + " of operators on " + describe(a.space_) + " and " +
                                describe(b.space_));
        }
    }

private:
    SpaceLabel space_;
    Matrix entries_;
};

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Truncated ladder operator on |0> ... |N-1>: a|n> = sqrt(n)|n-1>.
inline OperatorMatrix fock_annihilation(int n_states) {
    const SpaceLabel space = SpaceLabel::cavity(n_states);
    Matrix a = Matrix::Zero(n_states, n_states);
    for (int n = 1; n < n_states; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {space, std::move(a)};
}

/// A_ij = |i><j| on the three atomic levels.
inline OperatorMatrix atomic_transition(Level i, Level j) {
    Matrix m = Matrix::Zero(kAtomDim, kAtomDim);
    m(index_of(i), index_of(j)) = 1.0;
    return {SpaceLabel::atom(), std::move(m)};
}

inline OperatorMatrix atomic_transition(std::string_view i, std::string_view j) {
    return atomic_transition(parse_level(i), parse_level(j));
}

/// Kronecker product. atom (x) cavity yields the labeled composite space;
/// any other pairing yields a plain space of the product dimension.
inline OperatorMatrix tensor(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    Matrix m = kron(lhs.matrix(), rhs.matrix());
    if (lhs.space().factor == Factor::atom && rhs.space().factor == Factor::cavity) {
        return {SpaceLabel::composite(rhs.space().cavity_dim), std::move(m)};
    }
    const int d = static_cast<int>(m.rows());
    return {SpaceLabel::plain(d), std::move(m)};
}

/// op (x) I_N
inline OperatorMatrix embed_atom(const OperatorMatrix& op3, int n_states) {
    if (op3.space().factor != Factor::atom) {
        throw InvalidDimension("embed_atom expects an atomic operator, got " + describe(op3.space()));
    }
    return tensor(op3, OperatorMatrix::identity(SpaceLabel::cavity(n_states)));
}

/// I_3 (x) op
inline OperatorMatrix embed_cavity(const OperatorMatrix& op_n) {
    if (op_n.space().factor != Factor::cavity) {
        throw InvalidDimension("embed_cavity expects a cavity operator, got " + describe(op_n.space()));
    }
    return tensor(OperatorMatrix::identity(SpaceLabel::atom()), op_n);
}

/// Composite basis vector |level, n>.
inline Vector basis_ket(Level level, int photons, int n_states) {
    if (photons < 0 || photons >= n_states) {
        throw InvalidDimension("Fock index " + std::to_string(photons) + " outside truncation N=" +
                               std::to_string(n_states));
    }
    Vector v = Vector::Zero(kAtomDim * n_states);
    v(index_of(level) * n_states + photons) = 1.0;
    return v;
}

/// Hermitian, unit-trace, positive-semidefinite state on a labeled space.
class DensityMatrix {
public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-10;
    static constexpr double kPositivityTol = 1e-9;

    DensityMatrix(SpaceLabel space, Matrix entries) : space_(space), entries_(std::move(entries)) {
        const int d = space_.dimension();
        if (entries_.rows() != d || entries_.cols() != d) {
            throw InvalidDimension("density matrix size does not match space " + describe(space_));
        }
        const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
        if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
            throw InvalidState("density matrix is not Hermitian");
        }
        if (std::abs(entries_.trace() - Complex(1.0)) > kTraceTol) {
            throw InvalidState("density matrix trace differs from 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -kPositivityTol) {
            throw InvalidState("density matrix has a negative eigenvalue");
        }
    }

    static DensityMatrix pure(SpaceLabel space, const Vector& ket) {
        const Vector k = ket / ket.norm();
        return {space, k * k.adjoint()};
    }

    const SpaceLabel& space() const { return space_; }
    const Matrix& matrix() const { return entries_; }
    int dimension() const { return static_cast<int>(entries_.rows()); }
    Complex operator()(int row, int col) const { return entries_(row, col); }

private:
    SpaceLabel space_;
    Matrix entries_;
};

}  // namespace vic
