// Closed-form steady-state occupation: n_f = (i D6 / 2 Delta6 + i M6 / 2 Delta6 - 1) / 2
// with the sixth-order polynomial coefficients a0..a6 and b1..b5, transcribed
// term by term in complex arithmetic.
#include <cmath>
#include <complex>
#include <string>

#include "optomech/cooling.hpp"
#include "optomech/errors.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

}  // namespace

AnalyticPhonon analytic_phonon(const ClassicalSteadyState& ss, const ScaledParams& p) {
    if (!ss.stable) {
        throw StabilityError("phonon_number_analytic: steady state is dynamically unstable",
                             ss.stability_margin);
    }
    const double kc = p.kappa_c;
    const double ka = p.kappa_a;
    const double d = ss.delta_eff;
    const double da = p.delta_a;
    const double j = p.tunneling_j;
    const double gm = p.gamma_m;
    const double wm = 1.0;
    const double g2 = std::norm(ss.coupling_g);
    const double k = kc;

    const double gc = wm * wm + d * d;
    const double ga = wm * wm + da * da;
    const double fcp = kc * kc + d * d;
    const double fcm = kc * kc - d * d;
    const double fap = ka * ka + da * da;
    const double fam = ka * ka - da * da;
    const double j2 = j * j;
    const double j4 = j2 * j2;
    const double j6 = j4 * j2;
    const double d2 = d * d;
    const double da2 = da * da;
    const double wm2 = wm * wm;

    const cd a0 = 1.0;
    const cd a1 = -kI * (2.0 * (kc + ka) + gm);
    const cd a2 = -2.0 * j2 - 2.0 * kc * (2.0 * ka + gm) - ka * (ka + 2.0 * gm) - gc - (kc * kc + da2);
    const cd a3 = kI * (ka * ka * gm + 2.0 * j2 * (kc + ka + gm) + kc * kc * (2.0 * ka + gm) +
                        2.0 * ka * gc + gm * (d2 + da2) +
                        2.0 * kc * (2.0 * ka * gm + wm2 + fap));
    const cd a4 = j4 - 2.0 * g2 * wm * d + (2.0 * ka * gm + wm2) * d2 + fap * gc +
                  2.0 * j2 * (ka * gm + kc * (ka + gm) + wm2 - d * da) +
                  kc * kc * (ka * ka + 2.0 * ka * gm + ga) + 2.0 * kc * (gm * fap + 2.0 * ka * wm2);
    const cd a5 = kI * (-j4 * gm +
                        ka * (kc * (-kc * ka * gm - 2.0 * (kc + ka) * wm2) + 4.0 * g2 * wm * d -
                              (ka * gm + 2.0 * wm2) * d2) -
                        (2.0 * kc * wm2 + gm * fcp) * da2 -
                        2.0 * j2 * (ka * wm2 + kc * (ka * gm + wm2) - gm * d * da));
    const cd a6 = -wm * (j4 * wm + 2.0 * j2 * (kc * ka * wm + g2 * da - wm * d * da) +
                         (-2.0 * g2 * d + wm * fcp) * fap);

    const double n1 = 1.0 + 2.0 * p.nbar;
    const cd b1 = gm * wm2 * n1;
    const cd b2 = 2.0 * wm2 * (g2 * kc - n1 * gm * (2.0 * j2 - fcm - fam));
    const cd b3 = wm2 * (2.0 * g2 * (j2 * (-2.0 * kc + ka) + kc * (fcp + 2.0 * fam)) +
                         n1 * gm * (6.0 * j4 - 4.0 * d2 * fam + fcp * fcp + fap * fap +
                                    4.0 * kc * kc * fam +
                                    4.0 * j2 * (kc * ka - d * da - fcm - fam)));
    const cd b4 =
        2.0 * wm2 *
        (-n1 * gm *
             (2.0 * j6 + kc * kc * kc * kc * (da2 - ka * ka) +
              j4 * (4.0 * kc * ka - 4.0 * d * da - fcm - fam) -
              2.0 * j2 *
                  (kc * ka * (kc * kc - kc * ka + ka * ka) + ka * (kc + ka) * d2 +
                   (4.0 * kc * ka + ka * ka + fcp) * d * da + (kc * ka + fcm + d * da) * da2) -
              kc * kc * (2.0 * d2 * fam + fap * fap) + d2 * (fap * fap - fam * d2)) +
         g2 * (j4 * (kc - 2.0 * ka) + kc * (2.0 * fcp * fam + fap * fap) +
               j2 * (3.0 * kc * kc * ka + ka * (d2 + 4.0 * d * da + fap) +
                     2.0 * k * (d * da - fam))));
    const double t = j4 + 2.0 * j2 * (kc * ka - d * da) + fcp * fap;
    const cd b5 = wm2 * t * (2.0 * g2 * (j2 * ka + kc * fap) + n1 * gm * t);

    const cd delta6 =
        a5 * (a4 * (-a1 * a2 * a3 + a3 * a3 + a1 * a1 * a4) + (-a2 * a3 + a1 * (a2 * a2 - 2.0 * a4)) * a5 +
              a5 * a5) -
        (a3 * a3 * a3 - a1 * a3 * (a2 * a3 + 3.0 * a5) + a1 * a1 * (a3 * a4 + 2.0 * a2 * a5)) * a6 +
        a1 * a1 * a1 * a6 * a6;
    if (delta6 == 0.0 || a6 == 0.0) {
        throw NumericError("phonon_number_analytic: singular configuration (Delta6 = 0)");
    }

    const cd d6 = (-a3 * a4 * a5 + a3 * a3 * a6 + a5 * (a2 * a5 - a1 * a6)) * b1 +
                  (a1 * a4 * a5 - a5 * a5 - a1 * a3 * a6) * b2 +
                  (-a1 * a2 * a5 + a3 * a5 + a1 * a1 * a6) * b3 +
                  (-a3 * a3 - a1 * a1 * a4 + a1 * (a2 * a3 + a5)) * b4 +
                  (1.0 / a6) *
                      (a3 * a3 * a4 - a2 * a3 * a5 + a5 * a5 + a1 * a1 * (a4 * a4 - a2 * a6) +
                       a1 * (-a2 * a3 * a4 + a2 * a2 * a5 - 2.0 * a4 * a5 + a3 * a6)) *
                      b5;
    const cd m6 = (1.0 / wm2) *
                  (-(a5 * (-a2 * a3 * a4 + a2 * a2 * a5 + a4 * (a1 * a4 - a0 * a5)) +
                     (-a1 * a3 * a4 + a0 * a3 * a5 + a2 * (a3 * a3 - 2.0 * a1 * a5)) * a6 +
                     a1 * a1 * a6 * a6) *
                       b1 +
                   (-a3 * a4 * a5 + a3 * a3 * a6 + a5 * (a2 * a5 - a1 * a6)) * b2 +
                   (a1 * a4 * a5 - a5 * a5 - a1 * a3 * a6) * b3 +
                   (-a1 * a2 * a5 + a3 * a5 + a1 * a1 * a6) * b4 +
                   (-a3 * a3 - a1 * a1 * a4 + a1 * (a2 * a3 + a5)) * b5);

    const cd vq = kI * d6 / (2.0 * delta6);
    const cd vp = kI * m6 / (2.0 * delta6);

    AnalyticPhonon out;
    out.var_q = vq.real();
    out.var_p = vp.real();
    out.imag_residue = std::max(std::abs(vq.imag()) / std::abs(vq), std::abs(vp.imag()) / std::abs(vp));
    if (!std::isfinite(out.var_q) || !std::isfinite(out.var_p)) {
        throw NumericError("phonon_number_analytic: non-finite variance");
    }
    if (!(out.imag_residue < 1e-8)) {
        throw NumericError("phonon_number_analytic: imaginary residue " +
                           std::to_string(out.imag_residue) + " above 1e-8");
    }
    out.n_f = 0.5 * (out.var_q + out.var_p - 1.0);
    if (out.n_f < -1e-9) {
        throw IntegrityError("phonon_number_analytic: negative occupation " + std::to_string(out.n_f));
    }
    return out;
}

double phonon_number_analytic(const ClassicalSteadyState& ss, const ScaledParams& params) {
    return analytic_phonon(ss, params).n_f;
}

}  // namespace optomech
