#include "tqd/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqd
{
    StateTrajectory propagate_rk4(const HamiltonianFunction& h, double t0, double t1, const Vector& psi0, int steps,
                                  int record_every)
    {
        if (steps < kMinRk4Steps)
        {
            throw std::invalid_argument("propagation needs at least " + std::to_string(kMinRk4Steps) + " steps");
        }
        if (record_every < 1)
        {
            throw std::invalid_argument("record_every must be positive");
        }
        if (std::abs(psi0.norm() - 1.0) > 1e-10)
        {
            throw InvalidState("initial state is not normalized");
        }

        const double dt = (t1 - t0) / steps;
        auto rhs = [&h](double t, const Vector& y) -> Vector { return -kI * (h(t) * y); };

        StateTrajectory out;
        const auto expected = static_cast<std::size_t>(steps / record_every + 2);
        out.times.reserve(expected);
        out.states.reserve(expected);
        out.norms.reserve(expected);
        out.times.push_back(t0);
        out.states.push_back(psi0);
        out.norms.push_back(psi0.norm());

        Vector psi = psi0;
        for (int i = 0; i < steps; ++i)
        {
            const double t = t0 + i * dt;
            const Vector k1 = rhs(t, psi);
            const Vector k2 = rhs(t + 0.5 * dt, psi + (0.5 * dt) * k1);
            const Vector k3 = rhs(t + 0.5 * dt, psi + (0.5 * dt) * k2);
            const Vector k4 = rhs(t + dt, psi + dt * k3);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

            const double norm = psi.norm();
            if (!(std::abs(norm - 1.0) <= kNormDriftLimit))
            {
                throw NormDrift("norm drifted to " + std::to_string(norm) + " at t = " + std::to_string(t + dt) +
                                "; use more steps");
            }
            if ((i + 1) % record_every == 0 || i + 1 == steps)
            {
                out.times.push_back(i + 1 == steps ? t1 : t + dt);
                out.states.push_back(psi);
                out.norms.push_back(norm);
            }
        }
        return out;
    }

    StateTrajectory propagate(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                              const Vector& psi0, int steps, int record_every)
    {
        if (psi0.size() != traj.dim())
        {
            throw DimensionMismatch("initial state dimension differs from the Hamiltonian");
        }
        return propagate_rk4([&](double t) { return total_hamiltonian(traj, protocol, t).matrix(); },
                             traj.t_begin(), traj.t_end(), psi0, steps, record_every);
    }

    TrackingReport tracking_fidelity(const std::vector<StateTrajectory>& branches,
                                     const std::function<Matrix(double)>& reference)
    {
        if (branches.empty())
        {
            throw std::invalid_argument("tracking needs at least one branch");
        }
        const std::vector<double>& times = branches.front().times;
        for (const auto& b : branches)
        {
            if (b.times != times || b.states.size() != times.size())
            {
                throw std::invalid_argument("branches must share one time grid");
            }
        }

        TrackingReport r;
        r.times = times;
        const auto levels = static_cast<Index>(branches.size());
        const auto samples = static_cast<Index>(times.size());
        r.fidelity.resize(levels, samples);
        for (Index k = 0; k < samples; ++k)
        {
            const Matrix vectors = reference(times[static_cast<std::size_t>(k)]);
            for (Index n = 0; n < levels; ++n)
            {
                r.fidelity(n, k) = std::abs(vectors.col(n).dot(branches[static_cast<std::size_t>(n)].states[static_cast<std::size_t>(k)]));
            }
        }
        r.min_fidelity = r.fidelity.rowwise().minCoeff();
        r.final_fidelity = r.fidelity.col(samples - 1);
        return r;
    }

    TrackingReport tracking_fidelity(const std::vector<StateTrajectory>& branches, const HamiltonianTrajectory& traj)
    {
        return tracking_fidelity(branches, [&traj](double t) { return hermitian_eig(traj.h_at(t)).vectors; });
    }

    TrackingReport track_levels(const HamiltonianTrajectory& traj, const std::optional<DriveProtocol>& protocol,
                                int steps, int record_every)
    {
        const Matrix initial = hermitian_eig(traj.h_at(traj.t_begin())).vectors;
        std::vector<StateTrajectory> branches;
        for (Index n = 0; n < traj.dim(); ++n)
        {
            branches.push_back(propagate(traj, protocol, initial.col(n), steps, record_every));
        }
        return tracking_fidelity(branches, traj);
    }

    double average_speed(const std::vector<SpeedReport>& reports)
    {
        if (reports.size() < 2)
        {
            throw std::invalid_argument("average_speed needs at least two samples");
        }
        double area = 0;
        for (std::size_t i = 1; i < reports.size(); ++i)
        {
            area += 0.5 * (reports[i].speed + reports[i - 1].speed) * (reports[i].t - reports[i - 1].t);
        }
        return area / (reports.back().t - reports.front().t);
    }
} // namespace tqd
