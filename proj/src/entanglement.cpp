#include "optomech/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "optomech/errors.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

namespace {

int idx(Mode m) { return static_cast<int>(m); }

Eigen::MatrixXd reduced(const Mat6& v, std::initializer_list<Mode> modes) {
    std::vector<int> rows;
    for (Mode m : modes) {
        rows.push_back(2 * idx(m));
        rows.push_back(2 * idx(m) + 1);
    }
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out(i, j) = v(rows[i], rows[j]);
    }
    return out;
}

double negativity_from(double zeta) { return -std::log(2.0 * zeta); }

}  // namespace

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::CoolingCavity: return "cooling";
        case Mode::AuxiliaryCavity: return "auxiliary";
        case Mode::Mechanics: return "mechanics";
    }
    return "?";
}

Eigen::Matrix4d BipartiteCM::matrix() const {
    Eigen::Matrix4d m;
    m << a_block, c_block, c_block.transpose(), b_block;
    return m;
}

BipartiteCM extract_pair(const Mat6& v, Mode first, Mode second) {
    if (first == second) {
        throw ParameterError("extract_pair: the two modes must differ");
    }
    BipartiteCM cm;
    cm.first = first;
    cm.second = second;
    cm.a_block = v.block<2, 2>(2 * idx(first), 2 * idx(first));
    cm.b_block = v.block<2, 2>(2 * idx(second), 2 * idx(second));
    cm.c_block = v.block<2, 2>(2 * idx(first), 2 * idx(second));
    return cm;
}

double pt_symplectic_min_1v1(const BipartiteCM& cm) {
    const double sigma = cm.a_block.determinant() + cm.b_block.determinant() -
                         2.0 * cm.c_block.determinant();
    const double det = cm.matrix().determinant();
    double disc = sigma * sigma - 4.0 * det;
    if (disc < -1e-9) {
        throw IntegrityError("log_negativity_1v1: non-physical covariance (Sigma^2 - 4 det V = " +
                             std::to_string(disc) + ")");
    }
    disc = std::max(disc, 0.0);
    const double z2 = 0.5 * (sigma - std::sqrt(disc));
    if (!(z2 > 0.0)) {
        throw IntegrityError("log_negativity_1v1: non-positive symplectic eigenvalue");
    }
    return std::sqrt(z2);
}

double log_negativity_1v1(const BipartiteCM& cm) {
    return std::max(0.0, negativity_from(pt_symplectic_min_1v1(cm)));
}

double pt_symplectic_min(const Eigen::MatrixXd& v, int pivot) {
    const int modes = static_cast<int>(v.rows()) / 2;
    if (v.rows() != v.cols() || v.rows() % 2 != 0 || pivot < 0 || pivot >= modes) {
        throw ParameterError("pt_symplectic_min: bad covariance shape or pivot");
    }
    Eigen::MatrixXd flip = Eigen::MatrixXd::Identity(2 * modes, 2 * modes);
    flip(2 * pivot + 1, 2 * pivot + 1) = -1.0;
    const Eigen::MatrixXd pt = flip * v * flip;
    // eigenvalues of Omega V_PT are +-i nu
    Eigen::EigenSolver<Eigen::MatrixXd> solver(symplectic_form(modes) * pt, false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("pt_symplectic_min: symplectic spectrum computation failed");
    }
    return solver.eigenvalues().cwiseAbs().minCoeff();
}

double log_negativity_1v2(const CovarianceMatrix& cov, Mode single) {
    const Mat6 v = cov.real();
    std::vector<Mode> order{single};
    for (Mode m : {Mode::CoolingCavity, Mode::AuxiliaryCavity, Mode::Mechanics}) {
        if (m != single) order.push_back(m);
    }
    const Eigen::MatrixXd w = reduced(v, {order[0], order[1], order[2]});
    return std::max(0.0, negativity_from(pt_symplectic_min(w, 0)));
}

EntanglementReport residual_contangle(const CovarianceMatrix& cov) {
    const Mat6 v = cov.real();
    const double floor = uncertainty_min_eigenvalue(v);
    if (floor < -1e-9) {
        throw IntegrityError("residual_contangle: covariance violates the uncertainty relation (" +
                             std::to_string(floor) + ")");
    }
    EntanglementReport r;
    const auto pair = [&](Mode x, Mode y) { return log_negativity_1v1(extract_pair(v, x, y)); };
    r.e_cb = pair(Mode::CoolingCavity, Mode::Mechanics);
    r.e_ab = pair(Mode::AuxiliaryCavity, Mode::Mechanics);
    r.e_ac = pair(Mode::AuxiliaryCavity, Mode::CoolingCavity);

    const auto e2 = [&](Mode x, Mode y) {
        const double e = (x == Mode::CoolingCavity && y == Mode::Mechanics) ||
                                 (y == Mode::CoolingCavity && x == Mode::Mechanics)
                             ? r.e_cb
                         : (x == Mode::AuxiliaryCavity && y == Mode::Mechanics) ||
                                 (y == Mode::AuxiliaryCavity && x == Mode::Mechanics)
                             ? r.e_ab
                             : r.e_ac;
        return e * e;
    };

    r.raw_minimum = std::numeric_limits<double>::infinity();
    for (Mode pivot : {Mode::CoolingCavity, Mode::AuxiliaryCavity, Mode::Mechanics}) {
        std::vector<Mode> rest;
        for (Mode m : {Mode::CoolingCavity, Mode::AuxiliaryCavity, Mode::Mechanics}) {
            if (m != pivot) rest.push_back(m);
        }
        const double whole = log_negativity_1v2(cov, pivot);
        const double res = whole * whole - e2(pivot, rest[0]) - e2(pivot, rest[1]);
        r.residuals[idx(pivot)] = res;
        r.raw_minimum = std::min(r.raw_minimum, res);
        if (res < -kMonogamySlack) r.monogamy_ok = false;
    }
    r.tripartite = std::max(0.0, r.raw_minimum);
    return r;
}

CovarianceMatrix quadrature_covariance(const SystemParams& params) {
    const ScaledParams p = derive_dimensionless(params);
    const auto ss = solve_steady_state(p);
    return solve_lyapunov(build_drift(ss, p, Basis::Quadrature));
}

RobustnessSweep robustness_sweep(const SystemParams& params, std::span<const double> grid) {
    if (grid.empty()) {
        throw ParameterError("robustness_sweep: nbar grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ParameterError("robustness_sweep: nbar grid must be ascending, finite and >= 0");
        }
    }
    RobustnessSweep out;
    SystemParams p = params;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        p.nbar = grid[i];
        const Mat6 v = quadrature_covariance(p).real();
        RobustnessRow row;
        row.nbar = grid[i];
        const std::array<BipartiteCM, 3> pairs{extract_pair(v, Mode::CoolingCavity, Mode::Mechanics),
                                               extract_pair(v, Mode::AuxiliaryCavity, Mode::Mechanics),
                                               extract_pair(v, Mode::AuxiliaryCavity, Mode::CoolingCavity)};
        for (int k = 0; k < 3; ++k) row.unclipped[k] = negativity_from(pt_symplectic_min_1v1(pairs[k]));
        row.e_cb = std::max(0.0, row.unclipped[0]);
        row.e_ab = std::max(0.0, row.unclipped[1]);
        row.e_ac = std::max(0.0, row.unclipped[2]);
        out.rows.push_back(row);
        if (i > 0) out.grid_resolution = std::max(out.grid_resolution, grid[i] - grid[i - 1]);
    }
    // Round-off leaves separable pairs a few ulps above zero.
    constexpr double kFloor = 1e-12;
    for (int k = 0; k < 3; ++k) {
        for (std::size_t i = 0; i < out.rows.size(); ++i) {
            const double e = out.rows[i].unclipped[k];
            if (e > kFloor) continue;
            if (i == 0) {
                out.thresholds[k] = out.rows[0].nbar;
            } else {
                const double e0 = out.rows[i - 1].unclipped[k];
                const double n0 = out.rows[i - 1].nbar;
                const double n1 = out.rows[i].nbar;
                out.thresholds[k] = n0 + (n1 - n0) * e0 / (e0 - e);
            }
            break;
        }
    }
    return out;
}

}  // namespace optomech
