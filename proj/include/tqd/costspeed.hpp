#pragma once

#include <optional>
#include <vector>

#include "tqd/adiabatic.hpp"
#include "tqd/cdrive.hpp"

namespace tqd
{
    /// ||H^A||^alpha (Frobenius norm), the instantaneous driving cost rate.
    double cost_rate_from_operator(const HermitianOperator& ha, double alpha);

    /// [sum_n sum_{m != n} |<m|d n>|^2]^{alpha/2}.
    double collective_cost_rate(const SpectralFrame& frame, double alpha);

    /// [2 sum_{m != n} |<m|d n>|^2]^{alpha/2}.
    double individual_cost_rate(const SpectralFrame& frame, Index n, double alpha);

    struct CostReport
    {
        double t = 0;
        double alpha = 2;
        double collective_rate = 0;
        std::vector<double> individual_rates;
    };

    CostReport cost_report(const SpectralFrame& frame, double alpha);

    /// dC - [1/2 sum_n dC_n^{2/alpha}]^{alpha/2}; vanishes identically.
    double cost_relation_residual(const CostReport& report);

    /// dC_k - [sum_{n != k} dC_n^{2/alpha}]^{alpha/2}; zero iff driving level k alone costs as much as
    /// driving all levels.
    double equality_condition_gap(const CostReport& report, Index k);

    double fubini_study_metric(const SpectralFrame& frame, Index n);

    /// <d phi_perp|d phi_perp> with d phi_perp = d phi - <phi|d phi> phi. Throws InvalidState if phi is
    /// not normalized to 1e-10.
    double pure_state_metric(const Vector& phi, const Vector& dphi);

    // Populations at or below this are treated as empty.
    inline constexpr double kPopulationFloor = 1e-15;

    /// Quantum Fisher information metric of rho = sum_j p_j |j><j|:
    /// 1/4 sum_j dp_j^2 / p_j + 1/2 sum_{j != l} (p_j - p_l)^2 / (p_j + p_l) |<j|d l>|^2.
    double fisher_metric_spectral(const RealVector& p, const RealVector& dp, const Matrix& couplings);

    /// Throws InvalidState unless p_n >= 0 and sum p = 1 to 1e-12.
    void validate_populations(const RealVector& p);

    struct CanonicalEnsemble
    {
        double beta_scaled = 0; // hbar kappa / (k T)
        RealVector populations; // ascending-energy order
    };

    /// Gibbs populations exp(-beta_scaled E_n(t_begin)) / Z of the initial Hamiltonian.
    CanonicalEnsemble canonical_populations(const HamiltonianTrajectory& traj, double beta_scaled);

    struct SpeedReport
    {
        double t = 0;
        RealVector level_speeds; // v_n
        double speed = 0;        // v of the ensemble
        RealVector populations;
    };

    /// Speeds under transitionless driving (populations frozen, dp = 0).
    SpeedReport ensemble_speed(const SpectralFrame& frame, const RealVector& populations);
    inline SpeedReport ensemble_speed(const SpectralFrame& frame, const CanonicalEnsemble& ensemble)
    {
        return ensemble_speed(frame, ensemble.populations);
    }

    /// v_n - dC_n^{1/alpha} / sqrt(2).
    double speed_cost_check_individual(const SpectralFrame& frame, Index n, double alpha);

    /// dC^{1/alpha} - v; positive whenever some coupling is nonzero.
    double speed_cost_check_collective(const SpectralFrame& frame, const RealVector& populations, double alpha);

    /// Composite Simpson integral of the selected cost rate over the trajectory span. Odd `steps` are
    /// rounded up to the next even count.
    double cost_integral(const HamiltonianTrajectory& traj, const DriveProtocol& protocol, double alpha, int steps);

    /// sum_n p_n |n><n| over the columns of `vectors`.
    Matrix density_matrix(const Matrix& vectors, const RealVector& populations);

    /// tr sqrt(sqrt(rho) sigma sqrt(rho)). Throws InvalidState for non-PSD or non-unit-trace input.
    double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma);

    /// 1 - F evaluated without cancellation as half the squared Bures distance
    /// min_U ||sqrt(rho) - sqrt(sigma) U||^2, so nearby states keep full relative precision.
    double uhlmann_infidelity(const Matrix& rho, const Matrix& sigma);
} // namespace tqd
