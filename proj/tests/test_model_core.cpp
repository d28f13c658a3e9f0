#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "test_support.hpp"

#include "optomech/errors.hpp"
#include "optomech/params.hpp"
#include "optomech/steady_state.hpp"

using namespace optomech;

namespace {

// fig10 configuration: self-consistent Delta_c = omega_m, Delta_a = -omega_m.
SystemParams bistable_config(double power_left) {
    SystemParams p = with_assist(fig1_preset(), 0.15, 0.0);
    p.detuning_mode = DetuningMode::SelfConsistent;
    p.delta = p.omega_m;
    p.delta_a = -p.omega_m;
    p.power_left = power_left;
    return p;
}

std::string error_of(const SystemParams& p) {
    try {
        validate(p);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("params") {
    TEST_CASE("fig1 preset scales to the reference values") {
        const ScaledParams s = derive_dimensionless(fig1_preset());
        CHECK(s.kappa_c == rel(0.1, 1e-15));
        CHECK(s.kappa_a == rel(0.1, 1e-15));
        CHECK(s.gamma_m == rel(1e-5, 1e-15));
        CHECK(s.delta == rel(1.0, 1e-15));
        CHECK(s.tunneling_j == 0.0);
        CHECK(s.drive_right == 0.0);
        CHECK(s.nbar == 1e3);
    }

    TEST_CASE("g0 and Omega_L match the independent oracle") {
        // tests/oracle/optomech_oracle.py
        const ScaledParams s = derive_dimensionless(fig1_preset());
        CHECK(s.g0 == rel(4.616310203517989e-06, 1e-12));
        CHECK(s.drive_left == rel(2.261612203681755e+04, 1e-12));
    }

    TEST_CASE("zero drive power gives zero drive amplitude") {
        SystemParams p = fig1_preset();
        p.power_left = 0.0;
        CHECK(derive_dimensionless(p).drive_left == 0.0);
    }

    TEST_CASE("restore_si inverts derive_dimensionless") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        for (int i = 0; i < 50; ++i) {
            SystemParams p = with_assist(fig1_preset(), 0.3 * u(rng), 40e-3 * u(rng));
            p.kappa_c *= u(rng);
            p.mass *= u(rng);
            p.delta_a = (u(rng) - 1.25) * p.omega_m;
            p.nbar = 100.0 * u(rng);
            const SystemParams back = restore_si(derive_dimensionless(p));
            CHECK(back.kappa_c == rel(p.kappa_c, 1e-12));
            CHECK(back.tunneling_j == rel(p.tunneling_j, 1e-12));
            CHECK(back.delta_a == rel(p.delta_a, 1e-12));
            CHECK(back.mass == rel(p.mass, 1e-12));
            CHECK(back.power_left == rel(p.power_left, 1e-12));
            CHECK(back.power_right == rel(p.power_right, 1e-12));
            CHECK(back.nbar == rel(p.nbar, 1e-12));
        }
    }

    TEST_CASE("validation names the offending field") {
        SystemParams p = fig1_preset();
        p.power_left = -1.0;
        CHECK(error_of(p).find("power_left") != std::string::npos);

        p = fig1_preset();
        p.kappa_c = 0.0;
        CHECK(error_of(p).find("kappa_c") != std::string::npos);

        p = fig1_preset();
        p.mass = std::nan("");
        CHECK(error_of(p).find("mass") != std::string::npos);

        p = fig1_preset();
        p.nbar = -0.5;
        CHECK(error_of(p).find("nbar") != std::string::npos);

        CHECK(error_of(fig1_preset()).empty());
    }
}

TEST_SUITE("steady_state") {
    TEST_CASE("undriven system sits at the origin") {
        SystemParams p = with_assist(fig1_preset(), 0.2, 0.0);
        p.power_left = 0.0;
        const auto ss = solve_steady_state(p);
        CHECK(std::abs(ss.alpha_c) == 0.0);
        CHECK(std::abs(ss.alpha_a) == 0.0);
        CHECK(ss.q_ss == 0.0);
        CHECK(std::abs(ss.coupling_g) == 0.0);
        CHECK(ss.stable);
    }

    TEST_CASE("J = 0 decouples the auxiliary cavity") {
        SystemParams p = with_assist(fig1_preset(), 0.0, 50e-3);
        p.delta_a = -0.4 * p.omega_m;
        const ScaledParams s = derive_dimensionless(p);
        const auto ss = solve_steady_state(s, {RootPolicy::ContinuationFromZeroDrive, false});
        const std::complex<double> expected =
            std::complex<double>(0.0, -s.drive_right) / std::complex<double>(s.kappa_a, s.delta_a);
        CHECK(std::abs(ss.alpha_a - expected) <= 1e-12 * std::abs(expected));
        const std::complex<double> cooling =
            std::complex<double>(0.0, -s.drive_left) / std::complex<double>(s.kappa_c, s.delta);
        CHECK(std::abs(ss.alpha_c - cooling) <= 1e-12 * std::abs(cooling));
    }

    TEST_CASE("phase gauge makes G real without changing |G|") {
        const SystemParams p = with_assist(fig1_preset(), 0.15, 50e-3);
        const auto raw = solve_steady_state(p, {RootPolicy::ContinuationFromZeroDrive, false});
        const auto gauged = solve_steady_state(p);
        CHECK(gauged.coupling_g.imag() == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(gauged.coupling_g.real() >= 0.0);
        CHECK(std::abs(gauged.coupling_g) == rel(std::abs(raw.coupling_g), 1e-14));
        CHECK(std::abs(gauged.alpha_a) == rel(std::abs(raw.alpha_a), 1e-14));
        CHECK(gauged.q_ss == raw.q_ss);
    }

    TEST_CASE("|G| of the fig1 scenarios matches the oracle") {
        CHECK(std::abs(solve_steady_state(fig1_preset()).coupling_g) ==
              rel(1.038849025187483e-01, 1e-11));
        CHECK(std::abs(solve_steady_state(with_assist(fig1_preset(), 0.15, 50e-3)).coupling_g) ==
              rel(2.163993755247202e-01, 1e-11));
    }

    TEST_CASE("pinned and self-consistent modes agree") {
        const SystemParams pinned = with_assist(fig1_preset(), 0.15, 50e-3);
        const auto a = solve_steady_state(pinned);
        CHECK(a.delta_eff == 1.0);
        CHECK(a.delta_c == rel(1.0 + derive_dimensionless(pinned).g0 * a.q_ss, 1e-14));

        SystemParams sc = pinned;
        sc.detuning_mode = DetuningMode::SelfConsistent;
        sc.delta = a.delta_c * pinned.omega_m;
        const auto b = solve_steady_state(sc);
        CHECK(b.residual < kSteadyStateTolerance);
        CHECK(b.delta_eff == rel(1.0, 1e-9));
        CHECK(b.q_ss == rel(a.q_ss, 1e-9));
        CHECK(std::abs(b.coupling_g) == rel(std::abs(a.coupling_g), 1e-9));
    }

    TEST_CASE("real_cubic_roots finds every real root") {
        // (y - 1)(y - 2)(y + 3)
        const auto three = real_cubic_roots({6.0, -7.0, 0.0, 1.0});
        REQUIRE(three.size() == 3);
        CHECK(three[0] == rel(-3.0, 1e-14));
        CHECK(three[1] == rel(1.0, 1e-14));
        CHECK(three[2] == rel(2.0, 1e-14));

        // y^3 + y + 1 has a single real root
        const auto one = real_cubic_roots({1.0, 1.0, 0.0, 1.0});
        REQUIRE(one.size() == 1);
        CHECK(one[0] == rel(-0.6823278038280193, 1e-14));
        CHECK(cubic_residual({1.0, 1.0, 0.0, 1.0}, one[0]) < 1e-15);
    }

    TEST_CASE("bistability root counts match the brute-force oracle") {
        // tests/oracle/optomech_oracle.py scans the fixed-point equation for sign changes
        const double grid[] = {20e-3, 50e-3};
        const auto scan = bistability_scan(bistable_config(0.0), grid);
        REQUIRE(scan.size() == 2);
        CHECK(scan[0].roots.size() == 1);
        REQUIRE(scan[1].roots.size() == 3);
        CHECK(scan[1].roots[0].stable);
        CHECK_FALSE(scan[1].roots[1].stable);
        CHECK(scan[1].roots[0].x_ss < scan[1].roots[1].x_ss);
        CHECK(scan[1].roots[1].x_ss < scan[1].roots[2].x_ss);
    }

    TEST_CASE("every reported root solves the cubic and the onset goes 1 -> 3 -> 1") {
        std::vector<double> grid;
        for (int i = 0; i <= 400; ++i) grid.push_back(1e-3 * i);
        const auto scan = bistability_scan(bistable_config(0.0), grid);
        std::vector<std::size_t> runs;
        for (const auto& point : scan) {
            const std::size_t n = point.roots.size();
            CHECK((n == 1 || n == 3));
            if (runs.empty() || runs.back() != n) runs.push_back(n);
            const auto coeffs = steady_state_cubic(derive_dimensionless(bistable_config(point.power_left)));
            const double g0 = derive_dimensionless(bistable_config(point.power_left)).g0;
            for (const auto& r : point.roots) CHECK(cubic_residual(coeffs, g0 * r.q_ss) < 1e-9);
        }
        REQUIRE(runs.size() >= 2);
        CHECK(runs.size() <= 3);
        CHECK(runs[0] == 1);
        CHECK(runs[1] == 3);
        if (runs.size() == 3) CHECK(runs[2] == 1);
    }

    TEST_CASE("vanishing drive has the single root x = 0") {
        const double grid[] = {0.0, 1e-9};
        const auto scan = bistability_scan(bistable_config(0.0), grid);
        REQUIRE(scan[0].roots.size() == 1);
        CHECK(scan[0].roots[0].x_ss == 0.0);
        REQUIRE(scan[1].roots.size() == 1);
        CHECK(std::abs(scan[1].roots[0].x_ss) < 1e-18);
    }

    TEST_CASE("bistability grid must be increasing and non-negative") {
        const double bad[] = {10e-3, 5e-3};
        CHECK_THROWS_AS(bistability_scan(bistable_config(0.0), bad), ParameterError);
        const double negative[] = {-1e-3, 5e-3};
        CHECK_THROWS_AS(bistability_scan(bistable_config(0.0), negative), ParameterError);
    }

    TEST_CASE("root policies pick the extreme branches") {
        const ScaledParams s = derive_dimensionless(bistable_config(50e-3));
        const auto low = solve_steady_state(s, {RootPolicy::LowestDisplacement});
        const auto high = solve_steady_state(s, {RootPolicy::HighestDisplacement});
        CHECK(low.q_ss < high.q_ss);
        CHECK(low.residual < kSteadyStateTolerance);
        CHECK(high.residual < kSteadyStateTolerance);
    }
}
