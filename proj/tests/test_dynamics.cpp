#include <doctest.h>

#include "oracles.hpp"
#include "tqd/dynamics.hpp"

using namespace tqd;

namespace
{
    const LZ3Params kLz{};

    // Recorded diabatic baseline (bare sweep, 2e4 RK4 steps, step-halving converged).
    constexpr double kBareMiddleFinal = 0.97855;
    constexpr double kBareMiddleMin = 8.1e-5;
} // namespace

TEST_CASE("frozen Hamiltonian keeps an eigenstate")
{
    const HamiltonianTrajectory traj = frozen_trajectory(make_spin(1).sz, 1.0);
    Vector psi0 = Vector::Zero(3);
    psi0(1) = 1;
    const StateTrajectory run = propagate(traj, std::nullopt, psi0, 1000);
    for (const Vector& psi : run.states)
        CHECK(std::abs(psi0.dot(psi)) == doctest::Approx(1).epsilon(1e-12));
    const TrackingReport r = track_levels(traj, DriveProtocol::collective(), 1000);
    CHECK(r.min_fidelity.minCoeff() >= 1 - 1e-12);
}

TEST_CASE("recorded times and norms")
{
    const HamiltonianTrajectory traj = lz3_trajectory(kLz);
    const Vector psi0 = hermitian_eig(traj.h_at(0)).vectors.col(1);
    const StateTrajectory run = propagate(traj, DriveProtocol::collective(), psi0, 1000, 300);
    REQUIRE(run.times.size() == 5);
    CHECK(run.times.front() == 0.0);
    CHECK(run.times.back() == 1.0);
    CHECK(run.times[1] == doctest::Approx(0.3));
    for (std::size_t k = 1; k < run.times.size(); ++k)
        CHECK(run.times[k] > run.times[k - 1]);
    for (double n : run.norms)
        CHECK(std::abs(n - 1) <= 1e-8);
}

TEST_CASE("input validation")
{
    const HamiltonianTrajectory traj = lz3_trajectory(kLz);
    const Vector psi0 = hermitian_eig(traj.h_at(0)).vectors.col(1);
    CHECK_THROWS_AS(propagate(traj, std::nullopt, 2.0 * psi0, 1000), InvalidState);
    CHECK_THROWS_AS(propagate(traj, std::nullopt, Vector::Ones(2) / std::sqrt(2.0), 1000), DimensionMismatch);
    CHECK_THROWS(propagate(traj, std::nullopt, psi0, 10));

    // A stiff Hamiltonian with too few steps blows up the norm.
    const HamiltonianTrajectory stiff = frozen_trajectory(400.0 * make_spin(1).sx, 1.0);
    CHECK_THROWS_AS(propagate(stiff, std::nullopt, psi0, 100), NormDrift);
}

TEST_CASE("collective driving tracks every level")
{
    const HamiltonianTrajectory traj = lz3_trajectory(kLz);
    for (int steps : {10000, kDefaultRk4Steps})
    {
        const TrackingReport r = track_levels(traj, DriveProtocol::collective(), steps);
        CHECK(r.levels() == 3);
        CHECK(r.min_fidelity.minCoeff() >= 1 - 1e-8);
        CHECK(r.fidelity.maxCoeff() <= 1 + 1e-10);
    }
    const TrackingReport middle = track_levels(traj, DriveProtocol::individual(lz3_index(0)), 10000);
    CHECK(middle.min_fidelity.minCoeff() >= 1 - 1e-8);
}

TEST_CASE("individual driving protects only its target")
{
    const TrackingReport r = track_levels(lz3_trajectory(kLz), DriveProtocol::individual(lz3_index(1)), kDefaultRk4Steps);
    CHECK(r.min_fidelity(lz3_index(1)) >= 1 - 1e-8);
    CHECK(r.min_fidelity(lz3_index(0)) < 0.9);
}

TEST_CASE("bare sweep is strongly nonadiabatic")
{
    const TrackingReport r = track_levels(lz3_trajectory(kLz), std::nullopt, kDefaultRk4Steps);
    // The middle branch leaves its level mid-sweep and returns to it diabatically.
    CHECK(r.min_fidelity(lz3_index(0)) < 0.9);
    CHECK(r.min_fidelity(lz3_index(0)) == doctest::Approx(kBareMiddleMin).epsilon(0.05));
    CHECK(r.final_fidelity(lz3_index(0)) == doctest::Approx(kBareMiddleFinal).epsilon(1e-4));
    CHECK(r.final_fidelity(lz3_index(1)) < 0.1);
    CHECK(r.final_fidelity(lz3_index(-1)) < 0.1);
}

TEST_CASE("RK4 is fourth order")
{
    const HamiltonianTrajectory traj = lz3_trajectory(LZ3Params{0.5, 1.0, 1.0, 2.0});
    const Vector psi0 = hermitian_eig(traj.h_at(0)).vectors.col(0);
    auto final_state = [&](int steps) { return propagate(traj, std::nullopt, psi0, steps).states.back(); };
    const Vector reference = final_state(800);
    const double coarse = (final_state(100) - reference).norm();
    const double fine = (final_state(200) - reference).norm();
    CHECK(coarse / fine == doctest::Approx(16).epsilon(0.25));
}

TEST_CASE("populations and energies stay frozen under collective driving")
{
    const HamiltonianTrajectory traj = lz3_trajectory(kLz);
    const RealVector p = canonical_populations(traj, 0.5).populations;
    const Matrix initial = hermitian_eig(traj.h_at(0)).vectors;
    std::vector<StateTrajectory> branches;
    for (Index n = 0; n < 3; ++n)
        branches.push_back(propagate(traj, DriveProtocol::collective(), initial.col(n), kDefaultRk4Steps, 1000));

    for (std::size_t k = 0; k < branches[0].times.size(); ++k)
    {
        const double t = branches[0].times[k];
        Matrix psi(3, 3);
        for (Index n = 0; n < 3; ++n)
            psi.col(n) = branches[static_cast<std::size_t>(n)].states[k];
        const RealVector eig = hermitian_eig(HermitianOperator::symmetrized(density_matrix(psi, p))).values;
        CHECK((eig - Eigen::Vector3d(p(2), p(1), p(0))).cwiseAbs().maxCoeff() <= 1e-8);

        const RealVector e = hermitian_eig(traj.h_at(t)).values;
        for (Index n = 0; n < 3; ++n)
        {
            const double energy = psi.col(n).dot(traj.h_at(t).matrix() * psi.col(n)).real();
            CHECK(std::abs(energy - e(n)) <= 1e-6);
        }
    }
}

TEST_CASE("average speed")
{
    std::vector<SpeedReport> flat(5);
    for (int i = 0; i < 5; ++i)
    {
        flat[static_cast<std::size_t>(i)].t = i * 0.25;
        flat[static_cast<std::size_t>(i)].speed = 3.0;
    }
    CHECK(average_speed(flat) == doctest::Approx(3.0));
    CHECK_THROWS(average_speed({flat[0]}));

    auto middle_branch = [](double tau) {
        const LZ3Params p{0.1, 1.0, tau, 2.0};
        const HamiltonianTrajectory traj = lz3_trajectory(p);
        RealVector pure = RealVector::Zero(3);
        pure(lz3_index(0)) = 1;
        std::vector<SpeedReport> reports;
        for (int i = 0; i <= 4000; ++i)
            reports.push_back(ensemble_speed(spectral_frame(traj, tau * i / 4000.0), pure));
        return average_speed(reports);
    };
    const double swept = std::atan2(0.1, -1.0) - std::atan2(0.1, 1.0);
    CHECK(swept == doctest::Approx(2.9422).epsilon(1e-4));
    const double quadrature =
        oracle::integrate([](double t) { return std::abs(oracle::lz_field(0.1, 1, 1, t)); }, 0, 1, 1e-12);
    CHECK(quadrature == doctest::Approx(swept).epsilon(1e-10));
    CHECK(middle_branch(1.0) == doctest::Approx(swept).epsilon(1e-4));
    CHECK(middle_branch(2.0) == doctest::Approx(middle_branch(1.0) / 2).epsilon(1e-10));
}
