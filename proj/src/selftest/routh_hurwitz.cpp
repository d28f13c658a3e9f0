#include "optomech/selftest/routh_hurwitz.hpp"

#include <algorithm>

namespace optomech::selftest {

std::vector<long double> characteristic_polynomial(const Eigen::MatrixXd& a) {
    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    const int n = static_cast<int>(a.rows());
    const MatL al = a.cast<long double>();
    const MatL id = MatL::Identity(n, n);
    std::vector<long double> c(n + 1, 0.0L);  // c[k] multiplies lambda^(n-k)
    c[0] = 1.0L;
    MatL m = MatL::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        m = al * m + c[k - 1] * id;
        c[k] = -(al * m).trace() / k;
    }
    return c;
}

bool routh_hurwitz_stable(std::span<const long double> coeffs) {
    const std::size_t n = coeffs.size();
    if (n < 2) return true;
    const std::size_t width = (n + 1) / 2;
    std::vector<long double> prev(width, 0.0L), cur(width, 0.0L);
    for (std::size_t j = 0; j < n; ++j) {
        (j % 2 == 0 ? prev : cur)[j / 2] = coeffs[j];
    }
    if (prev[0] == 0.0L) return false;
    const bool positive = prev[0] > 0.0L;
    for (std::size_t row = 1; row < n; ++row) {
        if (cur[0] == 0.0L || (cur[0] > 0.0L) != positive) return false;
        std::vector<long double> next(width, 0.0L);
        for (std::size_t j = 0; j + 1 < width; ++j) {
            next[j] = (cur[0] * prev[j + 1] - prev[0] * cur[j + 1]) / cur[0];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }
    return true;
}

}  // namespace optomech::selftest
