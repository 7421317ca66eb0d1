#include "fujita/tridiagonal.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fujita/error.hpp"

namespace fujita {

std::vector<double> solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                                      std::span<const double> super, std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (sub.size() != n || super.size() != n || rhs.size() != n) {
        throw InvalidArgument("tridiagonal system with inconsistent sizes");
    }
    if (n == 0) return {};

    std::vector<double> c(n, 0.0);
    std::vector<double> x(n, 0.0);
    double pivot = diag[0];
    if (pivot == 0.0 || !std::isfinite(pivot)) throw NumericalError("singular tridiagonal row 0");
    c[0] = super[0] / pivot;
    x[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - sub[i] * c[i - 1];
        if (pivot == 0.0 || !std::isfinite(pivot)) {
            throw NumericalError(fmt::format("singular tridiagonal row {}", i));
        }
        c[i] = i + 1 < n ? super[i] / pivot : 0.0;
        x[i] = (rhs[i] - sub[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
}

}  // namespace fujita
