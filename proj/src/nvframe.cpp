#include "tqd/nvframe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tqd
{
    namespace
    {
        const SpinOperators& spin_one()
        {
            static const SpinOperators s = make_spin(1.0);
            return s;
        }

        double spin_of_dim(Index dim) { return 0.5 * static_cast<double>(dim - 1); }

        // Rows are rotated by U = exp(i epsilon S_z) so the rotating-frame state is U psi.
        std::vector<StateTrajectory> to_rotating_frame(std::vector<StateTrajectory> branches,
                                                       const PulseSchedule& pulse)
        {
            for (auto& b : branches)
            {
                for (std::size_t k = 0; k < b.times.size(); ++k)
                {
                    b.states[k] = rotation_about_z(spin_one(), pulse.epsilon(b.times[k])) * b.states[k];
                }
            }
            return branches;
        }

        std::vector<StateTrajectory> propagate_levels(const HamiltonianFunction& h, const PulseSchedule& pulse,
                                                      int steps, int record_every)
        {
            const Matrix initial = hermitian_eig(lz3_hamiltonian(pulse.lz(), 0.0)).vectors;
            std::vector<StateTrajectory> out;
            for (Index n = 0; n < initial.cols(); ++n)
            {
                out.push_back(propagate_rk4(h, 0.0, pulse.lz().tau, initial.col(n), steps, record_every));
            }
            return out;
        }
    } // namespace

    HermitianOperator nv_static_hamiltonian(const NVParams& p, double bz)
    {
        const SpinOperators& s = spin_one();
        return HermitianOperator(p.zero_field_d * s.sz.matrix() * s.sz.matrix() + p.gamma_e * bz * s.sz.matrix());
    }

    HermitianOperator bias_and_relabel(const NVParams& p, const HermitianOperator& static_h)
    {
        if (static_h.dim() != 3)
        {
            throw DimensionMismatch("NV ground state is three-dimensional");
        }
        Matrix m = static_h.matrix() - (2.0 * p.zero_field_d / 3.0) * Matrix::Identity(3, 3);
        // Basis rows are m = +1, 0, -1; the pi pulse exchanges |0> and |-1>.
        m.row(1).swap(m.row(2));
        m.col(1).swap(m.col(2));
        return HermitianOperator(m);
    }

    PulseSchedule::PulseSchedule(const NVParams& nv, const LZ3Params& lz, bool counterdiabatic)
        : nv_(nv), lz_(lz), omega0_(nv.omega0_over_kappa * lz.kappa), counterdiabatic_(counterdiabatic)
    {
        lz_.validate();
        if (!(nv.omega0_over_kappa > 0))
        {
            throw std::invalid_argument("omega0 must be positive");
        }
    }

    double PulseSchedule::epsilon(double t) const
    {
        return omega0_ * t - lz_.kappa * (t * t / lz_.tau - t);
    }

    double PulseSchedule::d_epsilon(double t) const
    {
        return omega0_ - linear_sweep(lz_, t).lambda;
    }

    double PulseSchedule::delta(double t) const
    {
        const double e = epsilon(t);
        const double v = counterdiabatic_ ? lz3_counterdiabatic_field(lz_, t) : 0.0;
        return 2.0 * (lz_.delta * std::cos(e) - v * std::sin(e));
    }

    double PulseSchedule::bx(double t) const
    {
        return delta(t) / (nv_.gamma_e * 1e9);
    }

    PulseSchedule synthesize_pulse(const NVParams& nv, const LZ3Params& lz, bool counterdiabatic)
    {
        return PulseSchedule(nv, lz, counterdiabatic);
    }

    HermitianOperator lab_hamiltonian(const PulseSchedule& pulse, double t)
    {
        const SpinOperators& s = spin_one();
        return pulse.delta(t) * s.sx + pulse.omega0() * s.sz;
    }

    HermitianOperator rotating_frame_transform(const HermitianOperator& lab_h, double epsilon, double d_epsilon)
    {
        const SpinOperators s = make_spin(spin_of_dim(lab_h.dim()));
        const Matrix u = rotation_about_z(s, epsilon);
        return HermitianOperator::symmetrized(u * lab_h.matrix() * u.adjoint() - d_epsilon * s.sz.matrix());
    }

    HermitianOperator rwa_hamiltonian(const PulseSchedule& pulse, double t)
    {
        const SpinOperators& s = spin_one();
        const double v = pulse.counterdiabatic() ? lz3_counterdiabatic_field(pulse.lz(), t) : 0.0;
        return pulse.lz().delta * s.sx + v * s.sy + linear_sweep(pulse.lz(), t).lambda * s.sz;
    }

    HermitianOperator rwa_remainder(const PulseSchedule& pulse, double t)
    {
        return rotating_frame_transform(lab_hamiltonian(pulse, t), pulse.epsilon(t), pulse.d_epsilon(t)) -
               rwa_hamiltonian(pulse, t);
    }

    double rwa_residual(const PulseSchedule& pulse, double t) { return rwa_remainder(pulse, t).norm(); }

    int min_lab_steps(const PulseSchedule& pulse)
    {
        const double periods = pulse.omega0() * pulse.lz().tau / (2.0 * std::numbers::pi);
        return static_cast<int>(std::ceil(40.0 * periods));
    }

    TrackingReport verify_lab_protocol(const PulseSchedule& pulse, int steps, int record_every)
    {
        if (steps < min_lab_steps(pulse))
        {
            throw StepTooCoarse(std::to_string(steps) + " steps do not resolve omega0; need at least " +
                                std::to_string(min_lab_steps(pulse)));
        }
        auto branches = propagate_levels([&](double t) { return lab_hamiltonian(pulse, t).matrix(); }, pulse, steps,
                                         record_every);
        const HamiltonianTrajectory lz = lz3_trajectory(pulse.lz());
        return tracking_fidelity(to_rotating_frame(std::move(branches), pulse), lz);
    }

    double verify_exact_transform(const PulseSchedule& pulse, int steps, int record_every)
    {
        if (steps < min_lab_steps(pulse))
        {
            throw StepTooCoarse(std::to_string(steps) + " steps do not resolve omega0; need at least " +
                                std::to_string(min_lab_steps(pulse)));
        }
        const auto lab = to_rotating_frame(
            propagate_levels([&](double t) { return lab_hamiltonian(pulse, t).matrix(); }, pulse, steps, record_every),
            pulse);
        const auto rotating = propagate_levels(
            [&](double t) {
                return rotating_frame_transform(lab_hamiltonian(pulse, t), pulse.epsilon(t), pulse.d_epsilon(t))
                    .matrix();
            },
            pulse, steps, record_every);

        double worst = 1.0;
        for (std::size_t n = 0; n < lab.size(); ++n)
        {
            for (std::size_t k = 0; k < lab[n].states.size(); ++k)
            {
                worst = std::min(worst, std::abs(lab[n].states[k].dot(rotating[n].states[k])));
            }
        }
        return worst;
    }
} // namespace tqd
