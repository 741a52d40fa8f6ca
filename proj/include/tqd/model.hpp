#pragma once

#include <functional>

#include "tqd/matcore.hpp"
#include "tqd/spinops.hpp"

namespace tqd
{
    /// H(t) with its analytic time derivative on [t_begin, t_end]. Units: hbar = 1, energies in kappa.
    class HamiltonianTrajectory
    {
    public:
        using Generator = std::function<HermitianOperator(double)>;

        HamiltonianTrajectory(Index dim, double t_begin, double t_end, Generator h, Generator dh);

        HermitianOperator h_at(double t) const;
        HermitianOperator dh_at(double t) const;

        Index dim() const { return dim_; }
        double t_begin() const { return t_begin_; }
        double t_end() const { return t_end_; }
        double duration() const { return t_end_ - t_begin_; }
        bool contains(double t) const;

    private:
        void check_time(double t) const;

        Index dim_;
        double t_begin_;
        double t_end_;
        Generator h_;
        Generator dh_;
    };

    /// Constant Hamiltonian on [0, tau]; dH/dt = 0.
    HamiltonianTrajectory frozen_trajectory(const HermitianOperator& h, double tau);

    struct LZ3Params
    {
        double delta = 0.1; // minimum splitting, units of kappa
        double kappa = 1.0; // sweep amplitude (frequency unit)
        double tau = 1.0;   // sweep duration, units of 1/kappa
        double alpha = 2.0; // cost exponent

        /// Throws std::invalid_argument unless delta, kappa, tau, alpha > 0.
        void validate() const;
    };

    struct SweepValue
    {
        double lambda;
        double dlambda;
    };

    /// lambda(t) = kappa (2t/tau - 1).
    SweepValue linear_sweep(const LZ3Params& p, double t);

    /// Delta S_x + lambda(t) S_z for spin 1.
    HermitianOperator lz3_hamiltonian(const LZ3Params& p, double t);

    /// V(t) = -Delta dlambda / (Delta^2 + lambda^2); H^A = V S_y.
    double lz3_counterdiabatic_field(const LZ3Params& p, double t);

    /// Landau-Zener sweep Delta S_x + lambda(t) S_z for arbitrary spin (S = 1 is the three-level model).
    HamiltonianTrajectory lz_trajectory(const LZ3Params& p, double spin = 1.0);
    inline HamiltonianTrajectory lz3_trajectory(const LZ3Params& p) { return lz_trajectory(p, 1.0); }

    /// Ascending-energy index of the level with magnetic number m along the field.
    inline Index lz_level_index(double spin, double m) { return static_cast<Index>(std::lround(m + spin)); }
    inline Index lz3_index(int n) { return lz_level_index(1.0, n); }

    /// Closed-form diagonalization of the sweep by a y-rotation through theta = atan2(Delta, lambda).
    class LZOracle
    {
    public:
        LZOracle(const LZ3Params& p, double spin);

        double theta(double t) const;
        double dtheta(double t) const;
        /// m |B| for m = -S, ..., S (ascending).
        RealVector energies(double t) const;
        /// R_y(theta) |m>, columns ascending in energy.
        Matrix eigenvectors(double t) const;
        /// Fubini-Study metric of the level with ascending index n: theta'^2 <m|S_y^2|m>.
        double metric(double t, Index n) const;

        const SpinOperators& spin() const { return s_; }
        const LZ3Params& params() const { return p_; }

    private:
        LZ3Params p_;
        SpinOperators s_;
    };

    LZOracle lz3_oracle(const LZ3Params& p);
} // namespace tqd
