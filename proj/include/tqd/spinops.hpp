#pragma once

#include "tqd/matcore.hpp"

namespace tqd
{
    // Angular-momentum matrices (hbar = 1) in the S_z eigenbasis ordered m = +S, ..., -S.
    struct SpinOperators
    {
        double spin = 0;
        HermitianOperator sx;
        HermitianOperator sy;
        HermitianOperator sz;

        Index dim() const { return sz.dim(); }
        /// Magnetic quantum number of basis row i.
        double m(Index i) const { return spin - static_cast<double>(i); }
    };

    /// Throws InvalidSpin unless 2S is a positive integer with 2S + 1 <= 16.
    SpinOperators make_spin(double spin);

    /// exp(-i theta S_y), evaluated through the spectral decomposition of S_y.
    Matrix rotation_about_y(const SpinOperators& s, double theta);

    /// exp(i phi S_z); diagonal since S_z is.
    Matrix rotation_about_z(const SpinOperators& s, double phi);
} // namespace tqd
