#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "optomech/params.hpp"
#include "optomech/steady_state.hpp"

namespace optomech {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat6c = Eigen::Matrix<std::complex<double>, 6, 6>;

// ComplexMode: u = (da_c, db, da_a, da_c^+, db^+, da_a^+)
// Quadrature:  u = (X_c, Y_c, X_a, Y_a, q, p)
enum class Basis { ComplexMode, Quadrature };

// "stable" requires max Re(lambda) below this (omega_m units).
inline constexpr double kStabilityThreshold = -1e-10;

struct StabilityVerdict {
    bool stable = false;
    double margin = 0.0;  // max_i Re(lambda_i)
};

struct DriftModel {
    Basis basis = Basis::Quadrature;
    Mat6c drift = Mat6c::Zero();
    Mat6c noise_corr = Mat6c::Zero();  // symmetrised diffusion matrix Q
    bool stable = false;
    double stability_margin = 0.0;

    // Wraps user matrices and fills in the stability verdict.
    static DriftModel from_matrices(Basis basis, const Mat6c& drift, const Mat6c& noise);

    // Real parts; only meaningful in the quadrature basis.
    Mat6 real_drift() const;
    Mat6 real_noise() const;
};

// Linearised drift and noise matrices around `ss`. Both bases describe the same
// dynamics: the complex-mode matrices are the exact change of basis of the
// quadrature ones, with the Brownian force acting on p only.
DriftModel build_drift(const ClassicalSteadyState& ss, const ScaledParams& params, Basis basis);

// Throws NumericError if the eigen-solver fails.
StabilityVerdict check_stability(const DriftModel& model);

// Quadrature drift matrix for a complex coupling G, without the stability check.
Mat6 quadrature_drift(const ScaledParams& params, double delta_eff, std::complex<double> g);

struct CovarianceMatrix {
    Basis basis = Basis::Quadrature;
    Mat6c v = Mat6c::Zero();
    double residual = 0.0;      // ||A V + V A^T + Q|| / ||Q||
    double condition = 0.0;     // estimated condition number of the solve
    std::string warning;        // empty unless something deserves attention

    // Real covariance; throws ParameterError outside the quadrature basis.
    Mat6 real() const;
};

inline constexpr double kIllConditioned = 1e12;

// Solves A V + V A^T = -Q through the 36x36 Kronecker system. Refuses
// unstable drift with a StabilityError carrying the margin.
CovarianceMatrix solve_lyapunov(const DriftModel& model);

// Block-diagonal symplectic form for `modes` modes, ordered (x1, p1, x2, p2, ...).
Eigen::MatrixXd symplectic_form(int modes);

// Smallest eigenvalue of V + (i/2) Omega. Non-negative for physical states.
double uncertainty_min_eigenvalue(const Eigen::MatrixXd& v);

}  // namespace optomech
