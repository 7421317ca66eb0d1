#pragma once

#include <cstdint>

#include <boost/rational.hpp>

#include "fujita/error.hpp"

namespace fujita {

/// Exact arithmetic for the exponent formulas when every input is rational.
using Rational = boost::rational<std::int64_t>;

// The formulas are templates so that the same expression serves double and
// Rational. For double they evaluate in exactly the order written here.

/// 1 + 2/N.
template <typename Real = double>
Real fujita_exponent(int dimension) {
    if (dimension < 1) throw InvalidArgument("dimension must be >= 1");
    return Real(1) + Real(2) / Real(dimension);
}

/// 1 + (2 + 2q + s)/N, the upper end of the guaranteed blow-up range for N >= 2.
template <typename Real = double>
Real blowup_threshold(int dimension, Real q, Real s) {
    if (dimension < 1) throw InvalidArgument("dimension must be >= 1");
    if (dimension == 1) {
        throw InvalidArgument(
            "blow-up threshold for N = 1 is governed by the one-dimensional condition "
            "1 < p < 3 + 2q + s (use one_dim_blowup_condition)");
    }
    if (q < Real(0) || s < Real(0)) throw InvalidArgument("q and s must be non-negative");
    return Real(1) + (Real(2) + Real(2) * q + s) / Real(dimension);
}

/// 1 + (2 + 2q + s)/(2 gamma0): above it small data give global solutions.
template <typename Real = double>
Real global_threshold(Real gamma0, Real q, Real s) {
    if (!(gamma0 > Real(0))) throw HypothesisFailed("global threshold requires gamma0 > 0");
    if (q < Real(0) || s < Real(0)) throw InvalidArgument("q and s must be non-negative");
    return Real(1) + (Real(2) + Real(2) * q + s) / (Real(2) * gamma0);
}

/// Decay exponent of the Gaussian super-solution, (2 + 2q + s)/(2p - 2).
template <typename Real = double>
Real supersolution_mu(Real p, Real q, Real s) {
    if (!(p > Real(1))) throw InvalidArgument("mu requires p > 1");
    return (Real(2) + Real(2) * q + s) / (Real(2) * p - Real(2));
}

}  // namespace fujita
