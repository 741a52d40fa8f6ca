#include <doctest.h>

#include "oracles.hpp"
#include "tqd/nvframe.hpp"

using namespace tqd;

namespace
{
    const LZ3Params kLz{};
    constexpr int kLabSteps = 200000;

    Matrix diag3(double a, double b, double c) { return Eigen::Vector3d(a, b, c).cast<Complex>().asDiagonal(); }
} // namespace

TEST_CASE("static NV Hamiltonian and bias")
{
    const NVParams nv;
    const double d = nv.zero_field_d;
    CHECK((nv_static_hamiltonian(nv, 0).matrix() - diag3(d, 0, d)).norm() < 1e-14);
    CHECK(nv.bias_field() == doctest::Approx(d / (3 * nv.gamma_e)));
    const HermitianOperator biased = nv_static_hamiltonian(nv, nv.bias_field());
    CHECK((biased.matrix() - diag3(4 * d / 3, 0, 2 * d / 3)).norm() < 1e-14);
    CHECK(nv.omega0_physical() == doctest::Approx(2 * d / 3).epsilon(1e-12));
    const HermitianOperator effective = bias_and_relabel(nv, biased);
    CHECK((effective.matrix() - nv.omega0_physical() * make_spin(1).sz.matrix()).norm() < 1e-12);
    CHECK_THROWS_AS(bias_and_relabel(nv, HermitianOperator::zero(2)), DimensionMismatch);
}

TEST_CASE("drive phase")
{
    const PulseSchedule pulse = synthesize_pulse(NVParams{}, kLz);
    CHECK(pulse.omega0() == 200.0);
    CHECK(pulse.epsilon(0) == 0.0);
    for (double t : {0.1, 0.5, 0.77, 1.0})
    {
        const double quad = oracle::integrate(
            [&](double s) { return pulse.omega0() - kLz.kappa * (2 * s / kLz.tau - 1); }, 0, t, 1e-13);
        CHECK(pulse.epsilon(t) == doctest::Approx(quad).epsilon(1e-10));
        const double h = 1e-5;
        if (t + h <= 1 && t - h >= 0)
        {
            const double fd = (pulse.epsilon(t + h) - pulse.epsilon(t - h)) / (2 * h);
            CHECK(fd == doctest::Approx(pulse.d_epsilon(t)).epsilon(1e-8));
        }
        CHECK(pulse.d_epsilon(t) == doctest::Approx(pulse.omega0() - linear_sweep(kLz, t).lambda));
    }
}

TEST_CASE("drive envelope")
{
    const PulseSchedule pulse = synthesize_pulse(NVParams{}, kLz);
    CHECK(pulse.delta(0) == doctest::Approx(2 * kLz.delta).epsilon(1e-15));
    CHECK(pulse.bx(0) == doctest::Approx(2 * kLz.delta / (28.02e9)).epsilon(1e-12));
    for (int i = 0; i <= 2000; ++i)
    {
        const double t = i / 2000.0;
        const double v = oracle::lz_field(0.1, 1, 1, t);
        CHECK(std::abs(pulse.delta(t)) <= 2 * std::sqrt(0.01 + v * v) + 1e-14);
    }
    const PulseSchedule plain = synthesize_pulse(NVParams{}, kLz, false);
    for (double t : {0.0, 0.25, 0.6})
        CHECK(plain.delta(t) == doctest::Approx(2 * kLz.delta * std::cos(plain.epsilon(t))).epsilon(1e-14));
}

TEST_CASE("rotating-frame transform")
{
    const SpinOperators s = make_spin(1);
    const HermitianOperator h = 0.3 * s.sx + 0.2 * s.sy - s.sz;
    CHECK((rotating_frame_transform(h, 0, 0).matrix() - h.matrix()).norm() < 1e-15);

    const double lambda = 0.37, omega0 = 50;
    const HermitianOperator diagonal = rotating_frame_transform(omega0 * s.sz, 1.3, omega0 - lambda);
    CHECK((diagonal.matrix() - lambda * s.sz.matrix()).norm() < 1e-12);

    const double eps = 0.9;
    const HermitianOperator rotated = rotating_frame_transform(s.sx, eps, 0);
    CHECK((rotated.matrix() - (std::cos(eps) * s.sx - std::sin(eps) * s.sy).matrix()).norm() < 1e-14);
}

TEST_CASE("dropping the counter-rotating terms leaves the driven sweep")
{
    const PulseSchedule pulse = synthesize_pulse(NVParams{}, kLz);
    const HamiltonianTrajectory traj = lz3_trajectory(kLz);
    for (int i = 0; i <= 50; ++i)
    {
        const double t = i / 50.0;
        CHECK((rwa_hamiltonian(pulse, t).matrix() - total_hamiltonian(traj, DriveProtocol::collective(), t).matrix())
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }
}

TEST_CASE("counter-rotating remainder")
{
    const PulseSchedule pulse = synthesize_pulse(NVParams{}, kLz);
    for (int i = 0; i <= 200; ++i)
    {
        const double t = i / 200.0;
        const double v = oracle::lz_field(0.1, 1, 1, t);
        const Matrix r = rwa_remainder(pulse, t).matrix();
        // The dropped part is (Delta + iV) exp(2i epsilon) S_+ / 2 plus its conjugate.
        const Complex expected = Complex(0.1, v) * std::exp(Complex(0, 2 * pulse.epsilon(t))) / std::sqrt(2.0);
        CHECK(std::abs(r(0, 1) - expected) <= 1e-12 * (1 + std::abs(v)));
        CHECK(std::abs(r(1, 2) - expected) <= 1e-12 * (1 + std::abs(v)));
        CHECK(std::abs(r(0, 2)) <= 1e-12);
        CHECK(r.diagonal().cwiseAbs().maxCoeff() <= 1e-12 * (1 + pulse.omega0()));
        CHECK(rwa_residual(pulse, t) == doctest::Approx(std::sqrt(2 * (0.01 + v * v))).epsilon(1e-12));
    }
    // Without a drive the remainder vanishes.
    const SpinOperators s = make_spin(1);
    const double t = 0.3;
    const HermitianOperator undriven =
        rotating_frame_transform(pulse.omega0() * s.sz, pulse.epsilon(t), pulse.d_epsilon(t));
    CHECK((undriven.matrix() - linear_sweep(kLz, t).lambda * s.sz.matrix()).norm() < 1e-12);
}

TEST_CASE("lab-frame protocol tracks the sweep")
{
    NVParams nv;
    const TrackingReport r200 = verify_lab_protocol(synthesize_pulse(nv, kLz), kLabSteps, 100);
    const double deficit200 = 1 - r200.min_fidelity.minCoeff();
    CHECK(deficit200 <= 1e-2);

    nv.omega0_over_kappa = 400;
    const TrackingReport r400 = verify_lab_protocol(synthesize_pulse(nv, kLz), kLabSteps, 100);
    const double deficit400 = 1 - r400.min_fidelity.minCoeff();
    CHECK(deficit400 < deficit200);
    // Measured convergence is close to quadratic in kappa / omega0.
    CHECK(deficit200 / deficit400 == doctest::Approx(4).epsilon(0.25));
}

TEST_CASE("lab-frame protocol without the counterdiabatic term")
{
    const TrackingReport r = verify_lab_protocol(synthesize_pulse(NVParams{}, kLz, false), kLabSteps, 100);
    CHECK(r.min_fidelity(lz3_index(0)) < 0.9);
}

TEST_CASE("exact transform reproduces the rotating-frame dynamics")
{
    CHECK(verify_exact_transform(synthesize_pulse(NVParams{}, kLz), kLabSteps, 100) >= 1 - 1e-8);
}

TEST_CASE("step resolution guard")
{
    const PulseSchedule pulse = synthesize_pulse(NVParams{}, kLz);
    CHECK(min_lab_steps(pulse) == static_cast<int>(std::ceil(40 * 200 / (2 * oracle::kPi))));
    CHECK_THROWS_AS(verify_lab_protocol(pulse, min_lab_steps(pulse) - 1), StepTooCoarse);
    CHECK_THROWS_AS(verify_exact_transform(pulse, 200), StepTooCoarse);
}
