#pragma once

#include "tqd/matcore.hpp"
#include "tqd/model.hpp"

namespace tqd
{
    // Spectra with min gap <= kDegeneracyThreshold * ||H|| are refused.
    inline constexpr double kDegeneracyThreshold = 1e-8;

    /// Eigenframe at one time plus tangent couplings <m_t|d_t n_t> in the parallel-transport gauge
    /// (zero diagonal).
    struct SpectralFrame
    {
        double t = 0;
        EigenSystem eigs;
        Matrix couplings;
        double min_gap = 0;

        Index dim() const { return eigs.dim(); }
        /// sum_{m != n} |<m|d n>|^2, the gauge-invariant <dn|dn> - |<n|dn>|^2.
        double transverse_norm2(Index n) const;
    };

    /// <m|dH|n> / (E_n - E_m) in the supplied eigenbasis; diagonal set to zero.
    Matrix tangent_couplings(const EigenSystem& eigs, const HermitianOperator& dh);

    SpectralFrame spectral_frame(const HermitianOperator& h, const HermitianOperator& dh, double t = 0.0);
    SpectralFrame spectral_frame(const HamiltonianTrajectory& traj, double t);

    /// Re-express a frame in an eigenbasis whose columns carry extra unit phases.
    SpectralFrame rephase(const SpectralFrame& frame, const Vector& phases, const HermitianOperator& dh);

    struct FiniteDifferenceTangents
    {
        Matrix couplings;  // <m_t|d n_t>, diagonal zeroed
        Matrix transverse; // columns |d n_perp> = |d n> - <n|d n>|n>
    };

    /// Central differences of gauge-aligned eigenvectors at t +- dt.
    /// Throws BranchMisTracking when |<n(t)|n(t +- dt)>| < 0.5.
    FiniteDifferenceTangents fd_tangents(const HamiltonianTrajectory& traj, double t, double dt);

    inline Matrix fd_coupling_oracle(const HamiltonianTrajectory& traj, double t, double dt)
    {
        return fd_tangents(traj, t, dt).couplings;
    }
} // namespace tqd
