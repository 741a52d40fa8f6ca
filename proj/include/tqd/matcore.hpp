#pragma once

#include <complex>

#include <Eigen/Dense>

#include "tqd/errors.hpp"

namespace tqd
{
    using Eigen::Index;
    using Complex = std::complex<double>;
    using Matrix = Eigen::MatrixXcd;
    using Vector = Eigen::VectorXcd;
    using RealVector = Eigen::VectorXd;

    inline constexpr Complex kI{0.0, 1.0};

    // Matrices handled here are small (dimension <= 16); larger inputs are rejected.
    inline constexpr Index kMaxDim = 16;

    template <typename Derived>
    typename Derived::RealScalar frobenius_norm(const Eigen::MatrixBase<Derived>& a)
    {
        // sqrt(tr(A^dagger A)) is the entrywise 2-norm.
        return a.norm();
    }

    template <typename Derived>
    typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& a)
    {
        return a.size() == 0 ? typename Derived::RealScalar(0) : a.cwiseAbs().maxCoeff();
    }

    template <typename DerivedA, typename DerivedB>
    Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
    commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
    {
        if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        {
            throw DimensionMismatch("commutator needs square matrices of equal dimension");
        }
        return a * b - b * a;
    }

    /// Largest |A_ij - conj(A_ji)| relative to max |A_ij| (0 for the zero matrix).
    template <typename Derived>
    typename Derived::RealScalar hermiticity_defect(const Eigen::MatrixBase<Derived>& a)
    {
        const auto scale = max_abs(a);
        if (scale == 0)
        {
            return 0;
        }
        return max_abs(a - a.adjoint()) / scale;
    }

    /// Dense complex matrix certified Hermitian at construction.
    class HermitianOperator
    {
    public:
        static constexpr double kTolerance = 1e-12;

        HermitianOperator() = default;
        explicit HermitianOperator(Matrix m);

        /// (M + M^dagger)/2 without the check; for builders whose output is Hermitian in exact arithmetic.
        static HermitianOperator symmetrized(const Matrix& m);
        static HermitianOperator zero(Index dim);

        const Matrix& matrix() const { return m_; }
        Index dim() const { return m_.rows(); }
        double norm() const { return frobenius_norm(m_); }
        Complex operator()(Index i, Index j) const { return m_(i, j); }

        HermitianOperator& operator+=(const HermitianOperator& other);
        HermitianOperator& operator-=(const HermitianOperator& other);
        HermitianOperator& operator*=(double s);

    private:
        struct Unchecked
        {
        };
        HermitianOperator(Matrix m, Unchecked) : m_(std::move(m)) {}

        Matrix m_;
    };

    HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b);
    HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b);
    HermitianOperator operator*(double s, HermitianOperator a);
    HermitianOperator operator*(HermitianOperator a, double s);

    struct EigenSystem
    {
        RealVector values;  // ascending
        Matrix vectors;     // orthonormal columns, same order as values
        double min_gap = 0; // smallest |E_n - E_m| over distinct pairs; +inf for dim 1
        bool near_degenerate = false;

        Index dim() const { return values.size(); }
        Eigen::Ref<const Vector> vector(Index n) const { return vectors.col(n); }
    };

    // Gaps below kDegeneracyFlag * ||A|| set EigenSystem::near_degenerate.
    inline constexpr double kDegeneracyFlag = 1e-10;

    /// Eigen-decomposition with ascending values. Each eigenvector is re-phased so its
    /// largest-magnitude component (first one on ties) is real and positive.
    EigenSystem hermitian_eig(const HermitianOperator& a);

    /// Rescale every column of `vectors` so its largest-magnitude entry is real positive.
    void fix_phases(Matrix& vectors);

    /// V diag(values) V^dagger.
    Matrix reconstruct(const EigenSystem& eigs);

    /// f(A) = V diag(f(values)) V^dagger for a scalar function f on the spectrum.
    template <typename F>
    Matrix spectral_function(const EigenSystem& eigs, F&& f)
    {
        Vector mapped(eigs.dim());
        for (Index k = 0; k < eigs.dim(); ++k)
        {
            mapped(k) = f(eigs.values(k));
        }
        return eigs.vectors * mapped.asDiagonal() * eigs.vectors.adjoint();
    }
} // namespace tqd
