#include "tqd/spinops.hpp"

#include <cmath>
#include <string>

namespace tqd
{
    SpinOperators make_spin(double spin)
    {
        const double twice = 2.0 * spin;
        if (!std::isfinite(spin) || spin <= 0 || std::abs(twice - std::round(twice)) > 1e-12)
        {
            throw InvalidSpin("spin must be a positive half-integer, got " + std::to_string(spin));
        }
        const Index dim = static_cast<Index>(std::lround(twice)) + 1;
        if (dim > kMaxDim)
        {
            throw InvalidSpin("2S + 1 = " + std::to_string(dim) + " exceeds 16");
        }
        const double s = 0.5 * static_cast<double>(dim - 1);

        // S+ |m> = sqrt(S(S+1) - m(m+1)) |m+1>; row i holds m = S - i.
        Matrix raise = Matrix::Zero(dim, dim);
        for (Index i = 1; i < dim; ++i)
        {
            const double m = s - static_cast<double>(i);
            raise(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
        }
        Matrix sz = Matrix::Zero(dim, dim);
        for (Index i = 0; i < dim; ++i)
        {
            sz(i, i) = s - static_cast<double>(i);
        }

        const Matrix lower = raise.adjoint();
        return SpinOperators{
            s,
            HermitianOperator(0.5 * (raise + lower)),
            HermitianOperator((raise - lower) / Complex(0.0, 2.0)),
            HermitianOperator(sz),
        };
    }

    Matrix rotation_about_y(const SpinOperators& s, double theta)
    {
        const EigenSystem eigs = hermitian_eig(s.sy);
        return spectral_function(eigs, [theta](double mu) { return std::exp(Complex(0.0, -theta * mu)); });
    }

    Matrix rotation_about_z(const SpinOperators& s, double phi)
    {
        Vector diag(s.dim());
        for (Index i = 0; i < s.dim(); ++i)
        {
            diag(i) = std::exp(Complex(0.0, phi * s.m(i)));
        }
        return diag.asDiagonal();
    }
} // namespace tqd
