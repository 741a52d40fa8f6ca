#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tqd/cdrive.hpp"
#include "tqd/costspeed.hpp"

namespace tqd
{
    inline constexpr int kDefaultRk4Steps = 20000;
    inline constexpr int kMinRk4Steps = 100;
    // Propagation aborts once | ||psi|| - 1 | exceeds this.
    inline constexpr double kNormDriftLimit = 1e-6;

    struct StateTrajectory
    {
        std::vector<double> times;
        std::vector<Vector> states;
        std::vector<double> norms;
    };

    using HamiltonianFunction = std::function<Matrix(double)>;

    /// Fixed-step classical RK4 for i d psi/dt = H(t) psi on [t0, t1]. Every `record_every`-th step
    /// (and the final one) is stored.
    StateTrajectory propagate_rk4(const HamiltonianFunction& h, double t0, double t1, const Vector& psi0, int steps,
                                  int record_every = 1);

    /// Schroedinger propagation under H(t) + H^A(t) for `protocol`, or bare H(t) without one.
    StateTrajectory propagate(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                              const Vector& psi0, int steps = kDefaultRk4Steps, int record_every = 1);

    struct TrackingReport
    {
        std::vector<double> times;
        Eigen::MatrixXd fidelity; // (level, sample) -> |<n_t|psi_n(t)>|
        RealVector min_fidelity;
        RealVector final_fidelity;

        Index levels() const { return fidelity.rows(); }
    };

    /// Branch n is compared with column n of reference(t) at every recorded time.
    TrackingReport tracking_fidelity(const std::vector<StateTrajectory>& branches,
                                     const std::function<Matrix(double)>& reference);
    TrackingReport tracking_fidelity(const std::vector<StateTrajectory>& branches, const HamiltonianTrajectory& traj);

    /// Propagate every instantaneous eigenstate of H(t_begin) and report how well each stays on its branch.
    TrackingReport track_levels(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                                int steps = kDefaultRk4Steps, int record_every = 1);

    /// (1/T) int v dt by the trapezoidal rule over the report times.
    double average_speed(const std::vector<SpeedReport>& reports);
} // namespace tqd
