#pragma once

#include "tqd/dynamics.hpp"
#include "tqd/model.hpp"

namespace tqd
{
    /// NV ground-state triplet. Physical constants in GHz and GHz/T; the simulation itself runs at the
    /// desk-scale ratio omega0_over_kappa.
    struct NVParams
    {
        double zero_field_d = 2.870; // D, GHz
        double gamma_e = 28.02;      // GHz/T
        double omega0_over_kappa = 200.0;

        /// omega0 = 2D/3 after the bias and pi-pulse relabeling (GHz).
        double omega0_physical() const { return 2.0 * zero_field_d / 3.0; }
        /// B_z = D / (3 gamma_e) places |+1> and |-1> at 4D/3 and 2D/3.
        double bias_field() const { return zero_field_d / (3.0 * gamma_e); }
    };

    /// D S_z^2 + gamma_e B_z S_z (GHz).
    HermitianOperator nv_static_hamiltonian(const NVParams& p, double bz);

    /// Shift every level down by 2D/3 and exchange |0> and |-1> (the polarized pi pulse). At the
    /// bias field this leaves omega0 S_z.
    HermitianOperator bias_and_relabel(const NVParams& p, const HermitianOperator& static_h);

    /// Lab-frame drive realizing the counterdiabatic LZ sweep in the frame rotating at epsilon(t).
    class PulseSchedule
    {
    public:
        PulseSchedule(const NVParams& nv, const LZ3Params& lz, bool counterdiabatic = true);

        /// int_0^t (omega0 - lambda) dt' = omega0 t - kappa (t^2/tau - t).
        double epsilon(double t) const;
        double d_epsilon(double t) const;
        /// 2 [Delta cos(epsilon) - V sin(epsilon)]; V is dropped when counterdiabatic() is false.
        double delta(double t) const;
        /// delta / gamma_e in tesla, taking kappa = 1 s^-1.
        double bx(double t) const;

        double omega0() const { return omega0_; }
        const NVParams& nv() const { return nv_; }
        const LZ3Params& lz() const { return lz_; }
        bool counterdiabatic() const { return counterdiabatic_; }

    private:
        NVParams nv_;
        LZ3Params lz_;
        double omega0_;
        bool counterdiabatic_;
    };

    PulseSchedule synthesize_pulse(const NVParams& nv, const LZ3Params& lz, bool counterdiabatic = true);

    /// delta(t) S_x + omega0 S_z.
    HermitianOperator lab_hamiltonian(const PulseSchedule& pulse, double t);

    /// U H U^dagger + i (dU/dt) U^dagger with U = exp(i epsilon S_z); the second term is -d_epsilon S_z.
    HermitianOperator rotating_frame_transform(const HermitianOperator& lab_h, double epsilon, double d_epsilon);

    /// Delta S_x + V S_y + lambda S_z: the rotating-frame Hamiltonian once exp(+-2i epsilon) terms are dropped.
    HermitianOperator rwa_hamiltonian(const PulseSchedule& pulse, double t);

    /// Exact rotating-frame Hamiltonian minus its RWA form.
    HermitianOperator rwa_remainder(const PulseSchedule& pulse, double t);

    /// Frobenius norm of rwa_remainder.
    double rwa_residual(const PulseSchedule& pulse, double t);

    /// Fewest RK4 steps giving 40 steps per drive period 2 pi / omega0.
    int min_lab_steps(const PulseSchedule& pulse);

    /// Propagate the lab-frame Hamiltonian from the t = 0 eigenstates, rotate back with U(t) and compare
    /// against the instantaneous LZ3 eigenvectors. Throws StepTooCoarse below min_lab_steps.
    TrackingReport verify_lab_protocol(const PulseSchedule& pulse, int steps, int record_every = 1);

    /// Smallest fidelity between rotated lab-frame states and states propagated directly under the exact
    /// rotating-frame Hamiltonian.
    double verify_exact_transform(const PulseSchedule& pulse, int steps, int record_every = 1);
} // namespace tqd
