#include "tqd/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tqd
{
    HamiltonianTrajectory::HamiltonianTrajectory(Index dim, double t_begin, double t_end, Generator h, Generator dh)
        : dim_(dim), t_begin_(t_begin), t_end_(t_end), h_(std::move(h)), dh_(std::move(dh))
    {
        if (!(t_end > t_begin))
        {
            throw std::invalid_argument("trajectory needs t_end > t_begin");
        }
        if (dim < 1 || dim > kMaxDim)
        {
            throw DimensionMismatch("trajectory dimension outside [1, 16]");
        }
    }

    bool HamiltonianTrajectory::contains(double t) const
    {
        const double slack = 1e-12 * duration();
        return t >= t_begin_ - slack && t <= t_end_ + slack;
    }

    void HamiltonianTrajectory::check_time(double t) const
    {
        if (!contains(t))
        {
            throw OutOfSpan("t = " + std::to_string(t) + " outside [" + std::to_string(t_begin_) + ", " +
                            std::to_string(t_end_) + "]");
        }
    }

    HermitianOperator HamiltonianTrajectory::h_at(double t) const
    {
        check_time(t);
        return h_(t);
    }

    HermitianOperator HamiltonianTrajectory::dh_at(double t) const
    {
        check_time(t);
        return dh_(t);
    }

    HamiltonianTrajectory frozen_trajectory(const HermitianOperator& h, double tau)
    {
        const Index dim = h.dim();
        return HamiltonianTrajectory(
            dim, 0.0, tau, [h](double) { return h; }, [dim](double) { return HermitianOperator::zero(dim); });
    }

    void LZ3Params::validate() const
    {
        if (!(delta > 0) || !(kappa > 0) || !(tau > 0) || !(alpha > 0))
        {
            throw std::invalid_argument("LZ parameters need delta, kappa, tau, alpha > 0");
        }
    }

    SweepValue linear_sweep(const LZ3Params& p, double t)
    {
        return {p.kappa * (2.0 * t / p.tau - 1.0), 2.0 * p.kappa / p.tau};
    }

    namespace
    {
        void check_sweep_time(const LZ3Params& p, double t)
        {
            if (t < -1e-12 * p.tau || t > p.tau * (1 + 1e-12))
            {
                throw OutOfSpan("t = " + std::to_string(t) + " outside [0, " + std::to_string(p.tau) + "]");
            }
        }

        HermitianOperator lz_h(const SpinOperators& s, const LZ3Params& p, double t)
        {
            const double lambda = linear_sweep(p, t).lambda;
            return p.delta * s.sx + lambda * s.sz;
        }
    } // namespace

    HermitianOperator lz3_hamiltonian(const LZ3Params& p, double t)
    {
        check_sweep_time(p, t);
        return lz_h(make_spin(1.0), p, t);
    }

    double lz3_counterdiabatic_field(const LZ3Params& p, double t)
    {
        check_sweep_time(p, t);
        const auto [lambda, dlambda] = linear_sweep(p, t);
        return -p.delta * dlambda / (p.delta * p.delta + lambda * lambda);
    }

    HamiltonianTrajectory lz_trajectory(const LZ3Params& p, double spin)
    {
        p.validate();
        const SpinOperators s = make_spin(spin);
        return HamiltonianTrajectory(
            s.dim(), 0.0, p.tau, [s, p](double t) { return lz_h(s, p, t); },
            [s, p](double t) { return linear_sweep(p, t).dlambda * s.sz; });
    }

    LZOracle::LZOracle(const LZ3Params& p, double spin) : p_(p), s_(make_spin(spin))
    {
        p_.validate();
    }

    double LZOracle::theta(double t) const
    {
        return std::atan2(p_.delta, linear_sweep(p_, t).lambda);
    }

    double LZOracle::dtheta(double t) const
    {
        const auto [lambda, dlambda] = linear_sweep(p_, t);
        return -p_.delta * dlambda / (p_.delta * p_.delta + lambda * lambda);
    }

    RealVector LZOracle::energies(double t) const
    {
        const double lambda = linear_sweep(p_, t).lambda;
        const double field = std::hypot(p_.delta, lambda);
        RealVector e(s_.dim());
        for (Index k = 0; k < s_.dim(); ++k)
        {
            e(k) = (static_cast<double>(k) - s_.spin) * field;
        }
        return e;
    }

    Matrix LZOracle::eigenvectors(double t) const
    {
        // Spin basis row i holds m = S - i, so ascending level k sits in row dim - 1 - k.
        const Matrix r = rotation_about_y(s_, theta(t));
        Matrix v(s_.dim(), s_.dim());
        for (Index k = 0; k < s_.dim(); ++k)
        {
            v.col(k) = r.col(s_.dim() - 1 - k);
        }
        return v;
    }

    double LZOracle::metric(double t, Index n) const
    {
        const double m = static_cast<double>(n) - s_.spin;
        const double w = dtheta(t);
        return w * w * 0.5 * (s_.spin * (s_.spin + 1) - m * m);
    }

    LZOracle lz3_oracle(const LZ3Params& p) { return LZOracle(p, 1.0); }
} // namespace tqd
