#include "tqd/adiabatic.hpp"

#include <string>

namespace tqd
{
    double SpectralFrame::transverse_norm2(Index n) const
    {
        return couplings.col(n).squaredNorm();
    }

    Matrix tangent_couplings(const EigenSystem& eigs, const HermitianOperator& dh)
    {
        const Matrix projected = eigs.vectors.adjoint() * dh.matrix() * eigs.vectors;
        Matrix c = Matrix::Zero(eigs.dim(), eigs.dim());
        for (Index n = 0; n < eigs.dim(); ++n)
        {
            for (Index m = 0; m < eigs.dim(); ++m)
            {
                if (m != n)
                {
                    c(m, n) = projected(m, n) / (eigs.values(n) - eigs.values(m));
                }
            }
        }
        return c;
    }

    namespace
    {
        void require_gap(const EigenSystem& eigs, const HermitianOperator& h, double t)
        {
            if (eigs.dim() > 1 && !(eigs.min_gap > kDegeneracyThreshold * h.norm()))
            {
                throw DegenerateSpectrum(t, eigs.min_gap);
            }
        }
    } // namespace

    SpectralFrame spectral_frame(const HermitianOperator& h, const HermitianOperator& dh, double t)
    {
        if (h.dim() != dh.dim())
        {
            throw DimensionMismatch("H and dH dimensions differ");
        }
        SpectralFrame f;
        f.t = t;
        f.eigs = hermitian_eig(h);
        require_gap(f.eigs, h, t);
        f.min_gap = f.eigs.min_gap;
        f.couplings = tangent_couplings(f.eigs, dh);
        return f;
    }

    SpectralFrame spectral_frame(const HamiltonianTrajectory& traj, double t)
    {
        return spectral_frame(traj.h_at(t), traj.dh_at(t), t);
    }

    SpectralFrame rephase(const SpectralFrame& frame, const Vector& phases, const HermitianOperator& dh)
    {
        SpectralFrame out = frame;
        out.eigs.vectors = frame.eigs.vectors * phases.asDiagonal();
        out.couplings = tangent_couplings(out.eigs, dh);
        return out;
    }

    FiniteDifferenceTangents fd_tangents(const HamiltonianTrajectory& traj, double t, double dt)
    {
        const HermitianOperator h = traj.h_at(t);
        const EigenSystem centre = hermitian_eig(h);
        require_gap(centre, h, t);

        auto aligned = [&](double at) {
            Matrix v = hermitian_eig(traj.h_at(at)).vectors;
            for (Index n = 0; n < v.cols(); ++n)
            {
                const Complex overlap = centre.vectors.col(n).dot(v.col(n));
                if (std::abs(overlap) < 0.5)
                {
                    throw BranchMisTracking("eigenvector " + std::to_string(n) + " lost between t = " +
                                            std::to_string(t) + " and " + std::to_string(at) + "; reduce dt");
                }
                v.col(n) *= std::conj(overlap) / std::abs(overlap);
            }
            return v;
        };

        const Matrix derivative = (aligned(t + dt) - aligned(t - dt)) / (2.0 * dt);

        FiniteDifferenceTangents out;
        out.couplings = centre.vectors.adjoint() * derivative;
        out.transverse = derivative;
        for (Index n = 0; n < derivative.cols(); ++n)
        {
            out.transverse.col(n) -= out.couplings(n, n) * centre.vectors.col(n);
            out.couplings(n, n) = 0;
        }
        return out;
    }
} // namespace tqd
