#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "optomech/linear_dynamics.hpp"
#include "optomech/params.hpp"

namespace optomech {

// Mode k occupies quadratures (2k, 2k+1) of the 6x6 quadrature covariance.
enum class Mode { CoolingCavity = 0, AuxiliaryCavity = 1, Mechanics = 2 };

std::string_view to_string(Mode mode);

// Reduced two-mode covariance [[A, C], [C^T, B]].
struct BipartiteCM {
    Eigen::Matrix2d a_block = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d b_block = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d c_block = Eigen::Matrix2d::Zero();
    Mode first = Mode::CoolingCavity;
    Mode second = Mode::Mechanics;

    Eigen::Matrix4d matrix() const;
};

// Exact sub-matrix of a 6x6 quadrature covariance; no re-solve.
BipartiteCM extract_pair(const Mat6& v, Mode first, Mode second);

// Smallest symplectic eigenvalue of the partial transpose,
// zeta^- = sqrt((Sigma - sqrt(Sigma^2 - 4 det V)) / 2), Sigma = det A + det B - 2 det C.
// Throws IntegrityError if Sigma^2 - 4 det V < -1e-9.
double pt_symplectic_min_1v1(const BipartiteCM& cm);

// E_N = max(0, -ln 2 zeta^-).
double log_negativity_1v1(const BipartiteCM& cm);

// Smallest |eigenvalue| of i Omega V_PT, with the partial transpose flipping
// the momentum of local mode `pivot`. Any number of modes.
double pt_symplectic_min(const Eigen::MatrixXd& v, int pivot);

// E_N of `single` against the other two modes of the full covariance.
double log_negativity_1v2(const CovarianceMatrix& cov, Mode single);

inline constexpr double kMonogamySlack = 1e-9;

struct EntanglementReport {
    double e_ab = 0.0;  // auxiliary cavity | mechanics
    double e_cb = 0.0;  // cooling cavity | mechanics
    double e_ac = 0.0;  // auxiliary cavity | cooling cavity
    double tripartite = 0.0;  // minimum residual contangle, floored at 0
    double raw_minimum = 0.0; // before flooring
    std::array<double, 3> residuals{};  // per pivot, indexed by Mode
    bool monogamy_ok = true;            // every residual >= -kMonogamySlack
};

// Bipartite negativities plus the minimum residual contangle
// min_r [E(r|st)^2 - E(r|s)^2 - E(r|t)^2]. A monogamy violation is reported
// through monogamy_ok rather than thrown. Throws IntegrityError if the
// covariance breaks the uncertainty relation.
EntanglementReport residual_contangle(const CovarianceMatrix& cov);

// Stable-system covariance in the quadrature basis.
CovarianceMatrix quadrature_covariance(const SystemParams& params);

struct RobustnessRow {
    double nbar = 0.0;
    double e_cb = 0.0;
    double e_ab = 0.0;
    double e_ac = 0.0;
    std::array<double, 3> unclipped{};  // -ln 2 zeta^- for (cb, ab, ac), may be negative
};

struct RobustnessSweep {
    std::vector<RobustnessRow> rows;
    // nbar where each pair first reaches zero, interpolated linearly in the
    // unclipped negativity; nullopt if it stays entangled across the grid.
    // Ordered (cb, ab, ac).
    std::array<std::optional<double>, 3> thresholds;
    double grid_resolution = 0.0;  // largest spacing of the nbar grid
};

// Requires an ascending, non-negative grid; refuses unstable points.
RobustnessSweep robustness_sweep(const SystemParams& params, std::span<const double> nbar_grid);

}  // namespace optomech
