#include "tqd/matcore.hpp"

#include <limits>
#include <string>

namespace tqd
{
    namespace
    {
        void check_square(const Matrix& m)
        {
            if (m.rows() != m.cols())
            {
                throw DimensionMismatch("operator must be square, got " + std::to_string(m.rows()) + "x" +
                                        std::to_string(m.cols()));
            }
            if (m.rows() == 0 || m.rows() > kMaxDim)
            {
                throw DimensionMismatch("operator dimension " + std::to_string(m.rows()) + " outside [1, 16]");
            }
        }

        void check_same_dim(const HermitianOperator& a, const HermitianOperator& b)
        {
            if (a.dim() != b.dim())
            {
                throw DimensionMismatch("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                                        std::to_string(b.dim()));
            }
        }
    } // namespace

    HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m))
    {
        check_square(m_);
        const double defect = hermiticity_defect(m_);
        if (defect > kTolerance)
        {
            throw NotHermitian("matrix is not Hermitian (relative defect " + std::to_string(defect) + ")");
        }
    }

    HermitianOperator HermitianOperator::symmetrized(const Matrix& m)
    {
        check_square(m);
        return HermitianOperator(Matrix(0.5 * (m + m.adjoint())), Unchecked{});
    }

    HermitianOperator HermitianOperator::zero(Index dim)
    {
        return HermitianOperator(Matrix::Zero(dim, dim));
    }

    HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other)
    {
        check_same_dim(*this, other);
        m_ += other.m_;
        return *this;
    }

    HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other)
    {
        check_same_dim(*this, other);
        m_ -= other.m_;
        return *this;
    }

    HermitianOperator& HermitianOperator::operator*=(double s)
    {
        m_ *= s;
        return *this;
    }

    HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
    HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
    HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
    HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }

    void fix_phases(Matrix& vectors)
    {
        for (Index k = 0; k < vectors.cols(); ++k)
        {
            Index pivot = 0;
            double best = -1.0;
            for (Index i = 0; i < vectors.rows(); ++i)
            {
                const double mag = std::abs(vectors(i, k));
                // Strict comparison with a relative margin keeps the first index on (near-)ties.
                if (mag > best * (1.0 + 1e-12))
                {
                    best = mag;
                    pivot = i;
                }
            }
            if (best > 0)
            {
                vectors.col(k) *= std::conj(vectors(pivot, k)) / best;
                vectors(pivot, k) = Complex(std::abs(vectors(pivot, k)), 0.0);
            }
        }
    }

    EigenSystem hermitian_eig(const HermitianOperator& a)
    {
        using Solver = Eigen::SelfAdjointEigenSolver<Matrix>;
        Solver solver(a.matrix(), Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success)
        {
            throw EigenFailure("Hermitian eigen-iteration did not converge for dimension " + std::to_string(a.dim()),
                               Solver::m_maxIterations * static_cast<int>(a.dim()));
        }

        EigenSystem out;
        out.values = solver.eigenvalues();
        out.vectors = solver.eigenvectors();
        fix_phases(out.vectors);

        out.min_gap = std::numeric_limits<double>::infinity();
        for (Index k = 1; k < out.values.size(); ++k)
        {
            out.min_gap = std::min(out.min_gap, out.values(k) - out.values(k - 1));
        }
        out.near_degenerate = out.values.size() > 1 && out.min_gap < kDegeneracyFlag * a.norm();
        return out;
    }

    Matrix reconstruct(const EigenSystem& eigs)
    {
        return eigs.vectors * eigs.values.cast<Complex>().asDiagonal() * eigs.vectors.adjoint();
    }
} // namespace tqd
