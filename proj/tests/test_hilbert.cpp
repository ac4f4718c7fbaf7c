#include <gtest/gtest.h>

#include <random>

#include "vic/hilbert.hpp"

using namespace vic;

namespace {

Matrix random_matrix(int d, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Complex(nd(rng), nd(rng));
    return m;
}

}  // namespace

TEST(FockAnnihilation, SingleExcitationLadder) {
    const auto a = fock_annihilation(2);
    Matrix expected(2, 2);
    expected << 0, 1, 0, 0;
    EXPECT_EQ(a.matrix(), expected);
}

TEST(FockAnnihilation, SqrtNRule) {
    const auto a = fock_annihilation(3);
    EXPECT_EQ(a(0, 1), Complex(1.0));
    EXPECT_EQ(a(1, 2), Complex(std::sqrt(2.0)));
    int nonzero = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) nonzero += a(i, j) != Complex(0.0);
    EXPECT_EQ(nonzero, 2);
}

TEST(FockAnnihilation, NumberOperatorIsDiagonal) {
    const auto a = fock_annihilation(3);
    const auto n = a.adjoint() * a;
    Matrix expected = Matrix::Zero(3, 3);
    expected.diagonal() << 0, 1, 2;
    EXPECT_LT((n.matrix() - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FockAnnihilation, RejectsEmptyTruncation) {
    EXPECT_THROW(fock_annihilation(0), InvalidDimension);
    EXPECT_THROW(fock_annihilation(-3), InvalidDimension);
}

TEST(FockAnnihilation, TruncatedCommutatorIsIdentityExceptLastRow) {
    for (int n = 1; n <= 7; ++n) {
        const auto a = fock_annihilation(n);
        const Matrix comm = a.matrix() * a.matrix().adjoint() - a.matrix().adjoint() * a.matrix();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == n - 1 && j == n - 1) {
                    EXPECT_NEAR(comm(i, j).real(), 1.0 - n, 1e-12);
                } else {
                    EXPECT_NEAR(std::abs(comm(i, j) - Complex(i == j ? 1.0 : 0.0)), 0.0, 1e-12);
                }
            }
    }
}

TEST(AtomicTransition, GroundProjectorHasUnitTrace) {
    EXPECT_EQ(atomic_transition(Level::g, Level::g).matrix().trace(), Complex(1.0));
}

TEST(AtomicTransition, ProjectorAlgebra) {
    const auto lhs = atomic_transition(Level::alpha, Level::g) * atomic_transition(Level::g, Level::alpha);
    EXPECT_EQ(lhs.matrix(), atomic_transition(Level::alpha, Level::alpha).matrix());
}

TEST(AtomicTransition, BrightStateCouplesWithSqrt2) {
    Vector bright = Vector::Zero(3);
    bright(index_of(Level::alpha)) = 1.0 / std::sqrt(2.0);
    bright(index_of(Level::beta)) = 1.0 / std::sqrt(2.0);
    const auto lower = atomic_transition(Level::g, Level::alpha) + atomic_transition(Level::g, Level::beta);
    const Vector out = lower.matrix() * bright;
    EXPECT_NEAR(std::abs(out(index_of(Level::g)) - std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_EQ(out(1), Complex(0.0));
    EXPECT_EQ(out(2), Complex(0.0));
}

TEST(AtomicTransition, AdjointSwapsLevels) {
    const Level levels[] = {Level::g, Level::alpha, Level::beta};
    for (Level i : levels)
        for (Level j : levels) EXPECT_EQ(atomic_transition(i, j).adjoint().matrix(), atomic_transition(j, i).matrix());
}

TEST(AtomicTransition, LabelsAndUnknownLabel) {
    EXPECT_EQ(atomic_transition("g", "alpha").matrix(), atomic_transition(Level::g, Level::alpha).matrix());
    EXPECT_THROW(atomic_transition("g", "gamma"), UnknownLevel);
    EXPECT_THROW(parse_level("e"), UnknownLevel);
}

TEST(Tensor, IdentityTimesIdentity) {
    for (int n = 1; n <= 4; ++n) {
        const auto id = tensor(OperatorMatrix::identity(SpaceLabel::atom()), OperatorMatrix::identity(SpaceLabel::cavity(n)));
        EXPECT_EQ(id.space(), SpaceLabel::composite(n));
        EXPECT_EQ(id.matrix(), Matrix::Identity(3 * n, 3 * n));
    }
}

TEST(Tensor, CouplingTermSparsity) {
    for (int n = 1; n <= 5; ++n) {
        const auto op = tensor(atomic_transition(Level::g, Level::alpha), fock_annihilation(n).adjoint());
        int nonzero = 0;
        for (int i = 0; i < 3 * n; ++i)
            for (int j = 0; j < 3 * n; ++j) nonzero += op(i, j) != Complex(0.0);
        EXPECT_EQ(nonzero, n - 1);
    }
}

TEST(Tensor, KroneckerOfDiagonals) {
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(2, 2);
    a.diagonal() << 1, 2, 3;
    b.diagonal() << 1, 10;
    const auto out = tensor(OperatorMatrix(SpaceLabel::atom(), a), OperatorMatrix(SpaceLabel::cavity(2), b));
    Eigen::VectorXcd expected(6);
    expected << 1, 10, 2, 20, 3, 30;
    EXPECT_EQ(out.matrix().diagonal(), expected);
    EXPECT_EQ(Matrix(out.matrix().diagonal().asDiagonal()), out.matrix());
}

TEST(Tensor, MixedProductAndAssociativity) {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix A = random_matrix(3, rng), C = random_matrix(3, rng);
        const Matrix B = random_matrix(2, rng), D = random_matrix(2, rng);
        const Matrix lhs = kron(A, B) * kron(C, D);
        const Matrix rhs = kron(A * C, B * D);
        EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);

        // Small integer entries keep every product exact.
        std::uniform_int_distribution<int> ui(-3, 3);
        auto small = [&](int d) {
            Matrix m(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) m(i, j) = Complex(ui(rng), ui(rng));
            return m;
        };
        const Matrix x = small(2), y = small(3), z = small(2);
        EXPECT_EQ(kron(kron(x, y), z), kron(x, kron(y, z)));
    }
}

TEST(Embedding, AtomProjectorTrace) {
    const auto p = embed_atom(atomic_transition(Level::alpha, Level::alpha), 2);
    EXPECT_EQ(p.matrix().trace(), Complex(2.0));
    EXPECT_LT((p.matrix() * p.matrix() - p.matrix()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Embedding, CavityNumberTrace) {
    const auto a = fock_annihilation(3);
    EXPECT_NEAR(embed_cavity(a.adjoint() * a).matrix().trace().real(), 9.0, 1e-12);
}

TEST(Embedding, FactorsCommute) {
    std::mt19937 rng(11);
    for (int n = 1; n <= 4; ++n) {
        const auto x = embed_atom(OperatorMatrix(SpaceLabel::atom(), random_matrix(3, rng)), n);
        const auto y = embed_cavity(OperatorMatrix(SpaceLabel::cavity(n), random_matrix(n, rng)));
        EXPECT_LT(((x * y) - (y * x)).matrix().cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Embedding, DimensionMismatch) {
    EXPECT_THROW(embed_atom(fock_annihilation(3), 3), InvalidDimension);
    EXPECT_THROW(embed_cavity(atomic_transition(Level::g, Level::g)), InvalidDimension);
    EXPECT_THROW(OperatorMatrix(SpaceLabel::cavity(3), Matrix::Zero(2, 2)), InvalidDimension);
    EXPECT_THROW(fock_annihilation(2) * fock_annihilation(3), SpaceMismatch);
}

TEST(DensityMatrix, ValidatesInvariants) {
    const auto space = SpaceLabel::composite(2);
    EXPECT_NO_THROW(DensityMatrix::pure(space, basis_ket(Level::g, 0, 2)));
    Matrix m = Matrix::Zero(6, 6);
    m(0, 0) = 0.5;
    EXPECT_THROW(DensityMatrix(space, m), InvalidState);  // trace
    m(0, 0) = 1.0;
    m(0, 1) = Complex(0.0, 0.1);
    EXPECT_THROW(DensityMatrix(space, m), InvalidState);  // Hermiticity
    Matrix neg = Matrix::Zero(6, 6);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(space, neg), InvalidState);  // positivity
}

TEST(BasisKet, CompositeIndexing) {
    const Vector k = basis_ket(Level::beta, 1, 3);
    EXPECT_EQ(k(2 * 3 + 1), Complex(1.0));
    EXPECT_THROW(basis_ket(Level::g, 3, 3), InvalidDimension);
}
