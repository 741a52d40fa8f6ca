#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "tqd/model.hpp"

using namespace tqd;

TEST_CASE("linear sweep endpoints")
{
    const LZ3Params p;
    CHECK(linear_sweep(p, 0).lambda == doctest::Approx(-1));
    CHECK(linear_sweep(p, 0).dlambda == doctest::Approx(2));
    CHECK(linear_sweep(p, 0.5).lambda == doctest::Approx(0));
    CHECK(linear_sweep(p, 1).lambda == doctest::Approx(1));
    CHECK(linear_sweep(LZ3Params{0.1, 2.0, 4.0, 2.0}, 4.0).dlambda == doctest::Approx(1.0));
}

TEST_CASE("Hamiltonian at the centre and the ends")
{
    const LZ3Params p;
    const SpinOperators s = make_spin(1);
    CHECK((lz3_hamiltonian(p, 0.5).matrix() - 0.1 * s.sx.matrix()).norm() < 1e-15);
    CHECK((oracle::eigenvalues3(lz3_hamiltonian(p, 0.5).matrix()) - Eigen::Vector3d(-0.1, 0, 0.1)).norm() < 1e-13);
    const double b = std::sqrt(1.01);
    CHECK((oracle::eigenvalues3(lz3_hamiltonian(p, 0).matrix()) - Eigen::Vector3d(-b, 0, b)).norm() < 1e-12);
    CHECK((lz3_hamiltonian(p, 0).matrix() - (0.1 * s.sx - s.sz).matrix()).norm() < 1e-15);
    CHECK_THROWS_AS(lz3_hamiltonian(p, 1.5), OutOfSpan);
    CHECK_THROWS_AS(lz3_hamiltonian(p, -0.1), OutOfSpan);
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS(LZ3Params{0.0, 1, 1, 2}.validate());
    CHECK_THROWS(LZ3Params{0.1, 1, -1, 2}.validate());
    CHECK_THROWS(LZ3Params{0.1, 1, 1, 0}.validate());
    CHECK_NOTHROW(LZ3Params{}.validate());
}

TEST_CASE("counterdiabatic field")
{
    const LZ3Params p;
    CHECK(lz3_counterdiabatic_field(p, 0.5) == doctest::Approx(-20).epsilon(1e-14));
    CHECK(lz3_counterdiabatic_field(p, 0) == doctest::Approx(-0.2 / 1.01).epsilon(1e-14));
    CHECK(lz3_counterdiabatic_field(p, 0) == doctest::Approx(-0.19802).epsilon(1e-5));
    for (double t = 0; t <= 1.0; t += 0.01)
        CHECK(lz3_counterdiabatic_field(p, t) == doctest::Approx(oracle::lz_field(0.1, 1, 1, t)).epsilon(1e-13));
}

TEST_CASE("analytic derivative matches a central difference")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const LZ3Params& p : {LZ3Params{}, LZ3Params{0.5, 1.0, 3.0, 2.0}})
    {
        const HamiltonianTrajectory traj = lz3_trajectory(p);
        const double dt = 1e-6 * p.tau;
        for (int i = 0; i < 100; ++i)
        {
            const double t = dt + (p.tau - 2 * dt) * u(rng);
            const Matrix fd = (traj.h_at(t + dt).matrix() - traj.h_at(t - dt).matrix()) / (2 * dt);
            CHECK((fd - traj.dh_at(t).matrix()).cwiseAbs().maxCoeff() <= 1e-6);
        }
    }
}

TEST_CASE("frozen trajectory")
{
    const HamiltonianTrajectory traj = frozen_trajectory(make_spin(1).sz, 2.0);
    CHECK(traj.dim() == 3);
    CHECK(traj.duration() == 2.0);
    CHECK(traj.dh_at(1.0).norm() == 0.0);
    CHECK(traj.contains(2.0));
    CHECK_FALSE(traj.contains(2.1));
}

TEST_CASE("rotation-angle oracle")
{
    const LZ3Params p;
    const LZOracle o = lz3_oracle(p);
    CHECK(o.theta(0.5) == doctest::Approx(oracle::kPi / 2).epsilon(1e-15));
    CHECK(o.theta(0) == doctest::Approx(std::atan2(0.1, -1.0)).epsilon(1e-15));
    CHECK(o.theta(0) == doctest::Approx(oracle::kPi - 0.0997).epsilon(1e-4));
    CHECK(o.metric(0.5, lz3_index(0)) == doctest::Approx(400).epsilon(1e-12));
    CHECK(o.metric(0.5, lz3_index(1)) == doctest::Approx(200).epsilon(1e-12));
    CHECK(o.metric(0.5, lz3_index(-1)) == doctest::Approx(200).epsilon(1e-12));

    double previous = o.theta(0);
    for (int i = 0; i <= 400; ++i)
    {
        const double t = i / 400.0;
        CAPTURE(t);
        CHECK(o.dtheta(t) == doctest::Approx(lz3_counterdiabatic_field(p, t)).epsilon(1e-12));
        CHECK(o.theta(t) <= previous + 1e-15);
        previous = o.theta(t);

        // Oracle eigenvectors agree with the numerical ones up to a phase.
        const EigenSystem e = hermitian_eig(lz3_hamiltonian(p, t));
        const Matrix v = o.eigenvectors(t);
        CHECK((o.energies(t) - e.values).norm() < 1e-12);
        for (Index n = 0; n < 3; ++n)
            CHECK(std::abs(v.col(n).dot(e.vectors.col(n))) >= 1 - 1e-10);
    }
}

TEST_CASE("g from finite-difference oracle eigenvectors")
{
    const LZOracle o = lz3_oracle(LZ3Params{});
    const double dt = 1e-5;
    const Matrix d = (o.eigenvectors(0.5 + dt) - o.eigenvectors(0.5 - dt)) / (2 * dt);
    const Matrix v = o.eigenvectors(0.5);
    for (Index n = 0; n < 3; ++n)
    {
        const Vector perp = d.col(n) - v.col(n).dot(d.col(n)) * v.col(n);
        CHECK(perp.squaredNorm() == doctest::Approx(o.metric(0.5, n)).epsilon(1e-6));
    }
}

TEST_CASE("level indices")
{
    CHECK(lz3_index(-1) == 0);
    CHECK(lz3_index(0) == 1);
    CHECK(lz3_index(1) == 2);
    CHECK(lz_level_index(0.5, -0.5) == 0);
    CHECK(lz_level_index(1.5, 1.5) == 3);
}
