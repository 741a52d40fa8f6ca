#pragma once

#include <optional>

#include "tqd/adiabatic.hpp"

namespace tqd
{
    /// Collective driving protects every eigenstate; individual driving protects level `level` only.
    struct DriveProtocol
    {
        enum class Kind
        {
            Collective,
            Individual,
        };

        Kind kind = Kind::Collective;
        Index level = 0; // ascending-energy index, used when kind == Individual

        static DriveProtocol collective() { return {Kind::Collective, 0}; }
        static DriveProtocol individual(Index n) { return {Kind::Individual, n}; }
    };

    /// H^A = i sum_{m != n} |m><m|d n><n|.
    HermitianOperator build_collective(const SpectralFrame& frame);

    /// H_n^A = i (|d n_perp><n| - |n><d n_perp|).
    HermitianOperator build_individual(const SpectralFrame& frame, Index n);

    HermitianOperator build_auxiliary(const SpectralFrame& frame, const DriveProtocol& protocol);

    /// H(t) plus the auxiliary term selected by `protocol`; bare H(t) when protocol is empty.
    HermitianOperator total_hamiltonian(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                                        double t);
} // namespace tqd
