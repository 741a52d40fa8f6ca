#include "tqd/costspeed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tqd
{
    namespace
    {
        void check_alpha(double alpha)
        {
            if (!(alpha > 0))
            {
                throw std::invalid_argument("cost exponent alpha must be positive");
            }
        }

        void check_level(const SpectralFrame& frame, Index n)
        {
            if (n < 0 || n >= frame.dim())
            {
                throw std::out_of_range("level " + std::to_string(n) + " outside [0, " +
                                        std::to_string(frame.dim()) + ")");
            }
        }

        double total_metric(const SpectralFrame& frame) { return frame.couplings.squaredNorm(); }
    } // namespace

    double cost_rate_from_operator(const HermitianOperator& ha, double alpha)
    {
        check_alpha(alpha);
        return std::pow(ha.norm(), alpha);
    }

    double collective_cost_rate(const SpectralFrame& frame, double alpha)
    {
        check_alpha(alpha);
        return std::pow(total_metric(frame), 0.5 * alpha);
    }

    double individual_cost_rate(const SpectralFrame& frame, Index n, double alpha)
    {
        check_alpha(alpha);
        check_level(frame, n);
        return std::pow(2.0 * frame.transverse_norm2(n), 0.5 * alpha);
    }

    CostReport cost_report(const SpectralFrame& frame, double alpha)
    {
        CostReport r;
        r.t = frame.t;
        r.alpha = alpha;
        r.collective_rate = collective_cost_rate(frame, alpha);
        r.individual_rates.reserve(static_cast<std::size_t>(frame.dim()));
        for (Index n = 0; n < frame.dim(); ++n)
        {
            r.individual_rates.push_back(individual_cost_rate(frame, n, alpha));
        }
        return r;
    }

    double cost_relation_residual(const CostReport& report)
    {
        const double q = 2.0 / report.alpha;
        double sum = 0;
        for (double rate : report.individual_rates)
        {
            sum += std::pow(rate, q);
        }
        return report.collective_rate - std::pow(0.5 * sum, 0.5 * report.alpha);
    }

    double equality_condition_gap(const CostReport& report, Index k)
    {
        const auto kk = static_cast<std::size_t>(k);
        if (k < 0 || kk >= report.individual_rates.size())
        {
            throw std::out_of_range("level index outside cost report");
        }
        const double q = 2.0 / report.alpha;
        double others = 0;
        for (std::size_t n = 0; n < report.individual_rates.size(); ++n)
        {
            if (n != kk)
            {
                others += std::pow(report.individual_rates[n], q);
            }
        }
        return report.individual_rates[kk] - std::pow(others, 0.5 * report.alpha);
    }

    double fubini_study_metric(const SpectralFrame& frame, Index n)
    {
        check_level(frame, n);
        return frame.transverse_norm2(n);
    }

    double pure_state_metric(const Vector& phi, const Vector& dphi)
    {
        if (phi.size() != dphi.size())
        {
            throw DimensionMismatch("state and derivative sizes differ");
        }
        if (std::abs(phi.norm() - 1.0) > 1e-10)
        {
            throw InvalidState("pure_state_metric needs a normalized state");
        }
        const Vector perp = dphi - phi.dot(dphi) * phi;
        return perp.squaredNorm();
    }

    double fisher_metric_spectral(const RealVector& p, const RealVector& dp, const Matrix& couplings)
    {
        const Index dim = p.size();
        if (dp.size() != dim || couplings.rows() != dim || couplings.cols() != dim)
        {
            throw DimensionMismatch("populations, rates and couplings must share one dimension");
        }

        double classical = 0;
        for (Index j = 0; j < dim; ++j)
        {
            if (p(j) <= kPopulationFloor)
            {
                if (dp(j) != 0.0)
                {
                    throw PopulationBoundary("population " + std::to_string(j) +
                                             " vanishes while its rate does not; classical Fisher term diverges");
                }
                continue;
            }
            classical += dp(j) * dp(j) / p(j);
        }

        double quantum = 0;
        for (Index j = 0; j < dim; ++j)
        {
            for (Index l = 0; l < dim; ++l)
            {
                const double total = p(j) + p(l);
                if (j == l || total <= kPopulationFloor)
                {
                    continue;
                }
                const double diff = p(j) - p(l);
                quantum += diff * diff / total * std::norm(couplings(j, l));
            }
        }
        return 0.25 * classical + 0.5 * quantum;
    }

    void validate_populations(const RealVector& p)
    {
        if (p.size() == 0 || p.minCoeff() < 0.0 || std::abs(p.sum() - 1.0) > 1e-12)
        {
            throw InvalidState("populations must be nonnegative and sum to 1");
        }
    }

    CanonicalEnsemble canonical_populations(const HamiltonianTrajectory& traj, double beta_scaled)
    {
        if (!(beta_scaled >= 0))
        {
            throw std::invalid_argument("beta_scaled must be nonnegative");
        }
        const RealVector e = hermitian_eig(traj.h_at(traj.t_begin())).values;
        // Shift by the ground energy so the largest weight is exactly 1.
        RealVector w = (-beta_scaled * (e.array() - e(0))).exp();
        CanonicalEnsemble out;
        out.beta_scaled = beta_scaled;
        out.populations = w / w.sum();
        return out;
    }

    SpeedReport ensemble_speed(const SpectralFrame& frame, const RealVector& populations)
    {
        if (populations.size() != frame.dim())
        {
            throw DimensionMismatch("population count differs from frame dimension");
        }
        validate_populations(populations);

        SpeedReport r;
        r.t = frame.t;
        r.populations = populations;
        r.level_speeds.resize(frame.dim());
        for (Index n = 0; n < frame.dim(); ++n)
        {
            r.level_speeds(n) = std::sqrt(frame.transverse_norm2(n));
        }
        const RealVector frozen = RealVector::Zero(frame.dim());
        r.speed = std::sqrt(fisher_metric_spectral(populations, frozen, frame.couplings));
        return r;
    }

    double speed_cost_check_individual(const SpectralFrame& frame, Index n, double alpha)
    {
        const double v = std::sqrt(fubini_study_metric(frame, n));
        return v - std::pow(individual_cost_rate(frame, n, alpha), 1.0 / alpha) / std::sqrt(2.0);
    }

    double speed_cost_check_collective(const SpectralFrame& frame, const RealVector& populations, double alpha)
    {
        if (frame.dim() < 2)
        {
            throw DimensionMismatch("collective speed-cost relation needs at least two levels");
        }
        const double v = ensemble_speed(frame, populations).speed;
        return std::pow(collective_cost_rate(frame, alpha), 1.0 / alpha) - v;
    }

    double cost_integral(const HamiltonianTrajectory& traj, const DriveProtocol& protocol, double alpha, int steps)
    {
        if (steps < 2)
        {
            throw std::invalid_argument("cost_integral needs at least 2 steps");
        }
        if (steps % 2 != 0)
        {
            ++steps;
        }
        const double h = traj.duration() / steps;
        auto rate = [&](int i) {
            const double t = i == steps ? traj.t_end() : traj.t_begin() + i * h;
            const SpectralFrame frame = spectral_frame(traj, t);
            return protocol.kind == DriveProtocol::Kind::Collective
                       ? collective_cost_rate(frame, alpha)
                       : individual_cost_rate(frame, protocol.level, alpha);
        };

        double sum = rate(0) + rate(steps);
        for (int i = 1; i < steps; ++i)
        {
            sum += (i % 2 == 1 ? 4.0 : 2.0) * rate(i);
        }
        return sum * h / 3.0;
    }

    Matrix density_matrix(const Matrix& vectors, const RealVector& populations)
    {
        if (vectors.cols() != populations.size())
        {
            throw DimensionMismatch("one population per state vector required");
        }
        return vectors * populations.cast<Complex>().asDiagonal() * vectors.adjoint();
    }

    namespace
    {
        EigenSystem checked_state(const Matrix& rho, const char* name)
        {
            if (std::abs(rho.trace() - Complex(1.0, 0.0)) > 1e-10)
            {
                throw InvalidState(std::string(name) + " does not have unit trace");
            }
            EigenSystem eigs = hermitian_eig(HermitianOperator(rho));
            if (eigs.values(0) < -1e-12)
            {
                throw InvalidState(std::string(name) + " has a negative eigenvalue " + std::to_string(eigs.values(0)));
            }
            return eigs;
        }
    } // namespace

    double uhlmann_fidelity(const Matrix& rho, const Matrix& sigma)
    {
        if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        {
            throw DimensionMismatch("density matrices differ in dimension");
        }
        const EigenSystem rho_eigs = checked_state(rho, "rho");
        checked_state(sigma, "sigma");

        const Matrix root = spectral_function(rho_eigs, [](double x) { return Complex(std::sqrt(std::max(x, 0.0))); });
        const HermitianOperator inner = HermitianOperator::symmetrized(root * sigma * root);
        const RealVector mu = hermitian_eig(inner).values;
        double f = 0;
        for (Index k = 0; k < mu.size(); ++k)
        {
            f += std::sqrt(std::max(mu(k), 0.0));
        }
        return std::clamp(f, 0.0, 1.0);
    }

    double uhlmann_infidelity(const Matrix& rho, const Matrix& sigma)
    {
        if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        {
            throw DimensionMismatch("density matrices differ in dimension");
        }
        auto root = [](const Matrix& m, const char* name) {
            return spectral_function(checked_state(m, name),
                                     [](double x) { return Complex(std::sqrt(std::max(x, 0.0))); });
        };
        const Matrix a = root(rho, "rho");
        const Matrix b = root(sigma, "sigma");
        // The trace norm of a b is attained by the polar unitary of (a b)^dagger.
        const Eigen::JacobiSVD<Matrix> svd(a * b, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Matrix u = svd.matrixV() * svd.matrixU().adjoint();
        return std::clamp(0.5 * (a - b * u).squaredNorm(), 0.0, 1.0);
    }
} // namespace tqd
