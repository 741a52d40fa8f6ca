#pragma once

#include <stdexcept>
#include <string>

namespace tqd
{
    // Base of every failure the library reports.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class DimensionMismatch : public Error
    {
    public:
        using Error::Error;
    };

    class NotHermitian : public Error
    {
    public:
        using Error::Error;
    };

    class EigenFailure : public Error
    {
    public:
        EigenFailure(const std::string& what, int iterations)
            : Error(what + " (iteration cap " + std::to_string(iterations) + ")"), iterations_(iterations)
        {
        }
        int iterations() const { return iterations_; }

    private:
        int iterations_;
    };

    class InvalidSpin : public Error
    {
    public:
        using Error::Error;
    };

    class OutOfSpan : public Error
    {
    public:
        using Error::Error;
    };

    /// Thrown wherever a tangent coupling would divide by a vanishing gap.
    class DegenerateSpectrum : public Error
    {
    public:
        DegenerateSpectrum(double t, double gap)
            : Error("degenerate spectrum at t = " + std::to_string(t) + " (min gap " + std::to_string(gap) + ")"),
              t_(t), gap_(gap)
        {
        }
        double time() const { return t_; }
        double gap() const { return gap_; }

    private:
        double t_;
        double gap_;
    };

    /// Finite-difference eigenvector tracking jumped branches; the step is too large.
    class BranchMisTracking : public Error
    {
    public:
        using Error::Error;
    };

    class NormDrift : public Error
    {
    public:
        using Error::Error;
    };

    class PopulationBoundary : public Error
    {
    public:
        using Error::Error;
    };

    class InvalidState : public Error
    {
    public:
        using Error::Error;
    };

    class StepTooCoarse : public Error
    {
    public:
        using Error::Error;
    };
} // namespace tqd
