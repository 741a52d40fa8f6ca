#include "tqd/cdrive.hpp"

#include <stdexcept>
#include <string>

namespace tqd
{
    HermitianOperator build_collective(const SpectralFrame& frame)
    {
        const Matrix& v = frame.eigs.vectors;
        return HermitianOperator::symmetrized(kI * v * frame.couplings * v.adjoint());
    }

    HermitianOperator build_individual(const SpectralFrame& frame, Index n)
    {
        if (n < 0 || n >= frame.dim())
        {
            throw std::out_of_range("level " + std::to_string(n) + " outside [0, " + std::to_string(frame.dim()) + ")");
        }
        const Matrix& v = frame.eigs.vectors;
        const Vector state = v.col(n);
        const Vector transverse = v * frame.couplings.col(n);
        const Matrix term = transverse * state.adjoint();
        return HermitianOperator::symmetrized(kI * (term - term.adjoint()));
    }

    HermitianOperator build_auxiliary(const SpectralFrame& frame, const DriveProtocol& protocol)
    {
        return protocol.kind == DriveProtocol::Kind::Collective ? build_collective(frame)
                                                                 : build_individual(frame, protocol.level);
    }

    HermitianOperator total_hamiltonian(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                                        double t)
    {
        if (!protocol)
        {
            return traj.h_at(t);
        }
        const HermitianOperator h = traj.h_at(t);
        const SpectralFrame frame = spectral_frame(h, traj.dh_at(t), t);
        return h + build_auxiliary(frame, *protocol);
    }
} // namespace tqd
