#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace optomech::selftest {

// Coefficients of det(lambda I - A), highest power first (leading 1),
// by the Faddeev-LeVerrier recursion.
std::vector<long double> characteristic_polynomial(const Eigen::MatrixXd& a);

// True iff every root lies in the open left half-plane, decided from the
// sign of the first column of the Routh array. A zero pivot counts as not stable.
bool routh_hurwitz_stable(std::span<const long double> coeffs);

}  // namespace optomech::selftest
