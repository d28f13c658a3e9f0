#include "optomech/linear_dynamics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
constexpr double kSqrt2 = 1.41421356237309504880;

Mat6c complex_mode_drift(const ScaledParams& p, double delta, cd g_full) {
    const cd g = g_full / kSqrt2;
    const cd gs = std::conj(g);
    const double j = p.tunneling_j;
    const double gm = p.gamma_m;
    Mat6c a = Mat6c::Zero();
    // da_c
    a(0, 0) = -cd(p.kappa_c, delta);
    a(0, 1) = kI * g;
    a(0, 4) = kI * g;
    a(0, 2) = -kI * j;
    // db: b = (q + i p)/sqrt2 with damping on p only
    a(1, 1) = cd(-gm / 2.0, -1.0);
    a(1, 4) = gm / 2.0;
    a(1, 0) = kI * gs;
    a(1, 3) = kI * g;
    // da_a
    a(2, 2) = -cd(p.kappa_a, p.delta_a);
    a(2, 0) = -kI * j;
    // Hermitian conjugates
    a(3, 3) = -cd(p.kappa_c, -delta);
    a(3, 1) = -kI * gs;
    a(3, 4) = -kI * gs;
    a(3, 5) = kI * j;
    a(4, 4) = cd(-gm / 2.0, 1.0);
    a(4, 1) = gm / 2.0;
    a(4, 3) = -kI * g;
    a(4, 0) = -kI * gs;
    a(5, 5) = -cd(p.kappa_a, -p.delta_a);
    a(5, 3) = kI * j;
    return a;
}

Mat6c complex_mode_noise(const ScaledParams& p) {
    const double thermal = p.gamma_m * (2.0 * p.nbar + 1.0);
    Mat6c q = Mat6c::Zero();
    q(0, 3) = q(3, 0) = p.kappa_c;
    q(2, 5) = q(5, 2) = p.kappa_a;
    q(1, 1) = q(4, 4) = -thermal / 2.0;
    q(1, 4) = q(4, 1) = thermal / 2.0;
    return q;
}

Mat6 quadrature_noise(const ScaledParams& p) {
    Mat6 q = Mat6::Zero();
    q(0, 0) = q(1, 1) = p.kappa_c;
    q(2, 2) = q(3, 3) = p.kappa_a;
    q(5, 5) = p.gamma_m * (2.0 * p.nbar + 1.0);
    return q;
}

template <typename Scalar>
struct LyapunovSolution {
    Eigen::Matrix<Scalar, 6, 6> v;
    double rcond = 0.0;
};

template <typename Scalar>
LyapunovSolution<Scalar> kronecker_solve(const Eigen::Matrix<Scalar, 6, 6>& a,
                                         const Eigen::Matrix<Scalar, 6, 6>& q) {
    using Big = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Big k = Big::Zero(36, 36);
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i < 6; ++i) {
            for (int m = 0; m < 6; ++m) {
                k(i + 6 * j, m + 6 * j) += a(i, m);  // A V
                k(i + 6 * j, i + 6 * m) += a(j, m);  // V A^T
            }
        }
    }
    Vec rhs(36);
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i < 6; ++i) rhs(i + 6 * j) = -q(i, j);
    }
    Eigen::PartialPivLU<Big> lu(k);
    Vec x = lu.solve(rhs);
    for (int iter = 0; iter < 2; ++iter) {
        const Vec r = rhs - k * x;
        x += lu.solve(r);
    }
    LyapunovSolution<Scalar> out;
    for (int j = 0; j < 6; ++j) {
        for (int i = 0; i < 6; ++i) out.v(i, j) = x(i + 6 * j);
    }
    out.v = (0.5 * (out.v + out.v.transpose())).eval();
    out.rcond = lu.rcond();
    return out;
}

template <typename Scalar>
double lyapunov_residual(const Eigen::Matrix<Scalar, 6, 6>& a, const Eigen::Matrix<Scalar, 6, 6>& v,
                         const Eigen::Matrix<Scalar, 6, 6>& q) {
    const double res = (a * v + v * a.transpose() + q).norm();
    const double scale = q.norm();
    return scale > 0.0 ? res / scale : res;
}

}  // namespace

DriftModel DriftModel::from_matrices(Basis basis, const Mat6c& drift, const Mat6c& noise) {
    DriftModel m;
    m.basis = basis;
    m.drift = drift;
    m.noise_corr = noise;
    const auto verdict = check_stability(m);
    m.stable = verdict.stable;
    m.stability_margin = verdict.margin;
    return m;
}

Mat6 DriftModel::real_drift() const { return drift.real(); }
Mat6 DriftModel::real_noise() const { return noise_corr.real(); }

Mat6 quadrature_drift(const ScaledParams& p, double delta, std::complex<double> g) {
    const double s = kSqrt2;
    const double j = p.tunneling_j;
    Mat6 a = Mat6::Zero();
    a(0, 0) = -p.kappa_c;
    a(0, 1) = delta;
    a(0, 3) = j;
    a(0, 4) = -s * g.imag();
    a(1, 0) = -delta;
    a(1, 1) = -p.kappa_c;
    a(1, 2) = -j;
    a(1, 4) = s * g.real();
    a(2, 1) = j;
    a(2, 2) = -p.kappa_a;
    a(2, 3) = p.delta_a;
    a(3, 0) = -j;
    a(3, 2) = -p.delta_a;
    a(3, 3) = -p.kappa_a;
    a(4, 5) = 1.0;
    a(5, 0) = s * g.real();
    a(5, 1) = s * g.imag();
    a(5, 4) = -1.0;
    a(5, 5) = -p.gamma_m;
    return a;
}

DriftModel build_drift(const ClassicalSteadyState& ss, const ScaledParams& p, Basis basis) {
    if (!std::isfinite(ss.coupling_g.real()) || !std::isfinite(ss.coupling_g.imag())) {
        throw NumericError("build_drift: coupling G is not finite");
    }
    if (basis == Basis::Quadrature) {
        return DriftModel::from_matrices(basis, quadrature_drift(p, ss.delta_eff, ss.coupling_g).cast<cd>(),
                                         quadrature_noise(p).cast<cd>());
    }
    return DriftModel::from_matrices(basis, complex_mode_drift(p, ss.delta_eff, ss.coupling_g),
                                     complex_mode_noise(p));
}

StabilityVerdict check_stability(const DriftModel& model) {
    if (!model.drift.allFinite()) {
        throw NumericError("check_stability: drift matrix is not finite");
    }
    Eigen::ComplexEigenSolver<Mat6c> solver(model.drift, false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("check_stability: eigenvalue solver did not converge");
    }
    StabilityVerdict v;
    v.margin = solver.eigenvalues().real().maxCoeff();
    v.stable = v.margin < kStabilityThreshold;
    return v;
}

Mat6 CovarianceMatrix::real() const {
    if (basis != Basis::Quadrature) {
        throw ParameterError("CovarianceMatrix::real: covariance is not in the quadrature basis");
    }
    return v.real();
}

CovarianceMatrix solve_lyapunov(const DriftModel& model) {
    if (!model.stable) {
        throw StabilityError("solve_lyapunov: drift is not stable (margin " +
                                 std::to_string(model.stability_margin) + ")",
                             model.stability_margin);
    }
    CovarianceMatrix cov;
    cov.basis = model.basis;
    double rcond = 0.0;
    if (model.basis == Basis::Quadrature) {
        const Mat6 a = model.real_drift();
        const Mat6 q = model.real_noise();
        const auto sol = kronecker_solve<double>(a, q);
        cov.v = sol.v.cast<cd>();
        cov.residual = lyapunov_residual<double>(a, sol.v, q);
        rcond = sol.rcond;
    } else {
        const auto sol = kronecker_solve<cd>(model.drift, model.noise_corr);
        cov.v = sol.v;
        cov.residual = lyapunov_residual<cd>(model.drift, sol.v, model.noise_corr);
        rcond = sol.rcond;
    }
    cov.condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (cov.condition > kIllConditioned) {
        cov.warning = "ill-conditioned Lyapunov solve (condition estimate " +
                      std::to_string(cov.condition) + ")";
    }
    return cov;
}

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

double uncertainty_min_eigenvalue(const Eigen::MatrixXd& v) {
    const int modes = static_cast<int>(v.rows()) / 2;
    const Eigen::MatrixXcd h = v.cast<cd>() + cd(0.0, 0.5) * symplectic_form(modes).cast<cd>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("uncertainty_min_eigenvalue: eigen-solver failed");
    }
    return solver.eigenvalues().minCoeff();
}

}  // namespace optomech
