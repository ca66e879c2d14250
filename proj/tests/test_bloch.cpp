#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "filament/bloch.hpp"

using namespace filament;

namespace {

PotentialSignal constant_potential(double c, std::size_t n = 256) {
    PotentialSignal q;
    q.samples.assign(n, cplx(c, 0.0));
    q.phase = 0.0;
    return q;
}

// closed-form discriminant of q = c: Delta(lambda) = 2 cos(pi sqrt(lambda^2 + c^2))
double delta_const(double c, double lam) { return 2.0 * std::cos(std::numbers::pi * std::hypot(lam, c)); }

} // namespace

TEST_CASE("free potential: monodromy is the exact diagonal propagator") {
    const PotentialSignal q = constant_potential(0.0, 64);
    for (int i = 0; i < 20; ++i) {
        const double lam = -5.0 + 10.0 * i / 19.0;
        const MonodromyResult m = monodromy(q, lam);
        const cplx d1(std::cos(std::numbers::pi * lam), -std::sin(std::numbers::pi * lam));
        const Mat2C exact{d1, 0.0, 0.0, std::conj(d1)};
        CHECK((m.T - exact).norm_max() < 1e-10);
        CHECK(std::abs(m.discriminant - 2.0 * std::cos(std::numbers::pi * lam)) < 1e-10);
    }
}

TEST_CASE("constant potential: discriminant closed form and T(0) = -Id") {
    const PotentialSignal q = constant_potential(1.0);
    for (int i = 0; i < 40; ++i) {
        const double lam = -4.0 + 8.0 * i / 39.0;
        const MonodromyResult m = monodromy(q, lam);
        CHECK(std::abs(m.discriminant.real() - delta_const(1.0, lam)) < 1e-9);
        CHECK(std::abs(m.discriminant.imag()) < 1e-9);
        CHECK(m.T.is_unimodular(1e-10));
        CHECK(m.T.is_unitary(1e-9));
        CHECK(std::abs(m.discriminant.real()) <= 2.0 + 1e-9);
    }
    const MonodromyResult m0 = monodromy(q, 0.0);
    CHECK((m0.T + Mat2C::identity()).norm_max() < 1e-10);
}

TEST_CASE("monodromy at complex lambda keeps det T = 1; multipliers conjugate-symmetric") {
    const PotentialSignal q = constant_potential(1.0, 128);
    for (const cplx lam : {cplx(0.7, 0.4), cplx(-1.3, 0.9), cplx(2.0, -0.6)}) {
        const MonodromyResult m = monodromy(q, lam);
        CHECK(m.T.is_unimodular(1e-10));
        const MonodromyResult mc = monodromy(q, std::conj(lam));
        // multipliers at conj(lambda) are conjugates of those at lambda (as a pair)
        const double d1 = std::abs(mc.w1 - std::conj(m.w1)) + std::abs(mc.w2 - std::conj(m.w2));
        const double d2 = std::abs(mc.w1 - std::conj(m.w2)) + std::abs(mc.w2 - std::conj(m.w1));
        CHECK(std::min(d1, d2) < 1e-8);
        CHECK(std::abs(m.w1 * m.w2 - 1.0) < 1e-10);
    }
}

TEST_CASE("monodromy rejects quasi-periodic input") {
    PotentialSignal q = constant_potential(1.0, 64);
    q.phase = 1.0;
    CHECK_THROWS_AS(monodromy(q, 0.0), validation_error);
}

TEST_CASE("discriminant scan hits the closed forms") {
    const PotentialSignal q0 = constant_potential(0.0, 64);
    const auto s0 = discriminant_scan(q0, {0.0, 1.0, 2.0});
    CHECK(s0[0].second.real() == Catch::Approx(2.0).margin(1e-10));
    CHECK(s0[1].second.real() == Catch::Approx(-2.0).margin(1e-10));
    CHECK(s0[2].second.real() == Catch::Approx(2.0).margin(1e-10));

    const PotentialSignal q1 = constant_potential(1.0);
    const auto s1 = discriminant_scan(q1, {0.0, std::sqrt(3.0), std::sqrt(8.0)});
    CHECK(s1[0].second.real() == Catch::Approx(-2.0).margin(1e-9));
    CHECK(s1[1].second.real() == Catch::Approx(2.0).margin(1e-9));
    CHECK(s1[2].second.real() == Catch::Approx(-2.0).margin(1e-9));

    const auto sh = discriminant_scan(q1, {0.5});
    CHECK(sh[0].second.real() ==
          Catch::Approx(2.0 * std::cos(std::numbers::pi * std::sqrt(1.25))).margin(1e-9));

    // threaded scan returns identical values in lambda order
    std::vector<double> grid;
    for (int i = 0; i < 33; ++i) grid.push_back(-2.0 + i * 0.125);
    const auto ser = discriminant_scan(q1, grid, 1e-11, 1);
    const auto par = discriminant_scan(q1, grid, 1e-11, 4);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(ser[i].first == par[i].first);
        CHECK(std::abs(ser[i].second - par[i].second) == 0.0);
    }
}

TEST_CASE("real double points of the free potential sit at the integers") {
    const PotentialSignal q = constant_potential(0.0, 64);
    const DoublePointScan scan = find_real_double_points(q, -2.5, 2.5);
    REQUIRE(scan.points.size() == 5);
    for (int i = 0; i < 5; ++i) {
        CHECK(scan.points[i].lambda == Catch::Approx(-2.0 + i).margin(1e-9));
        CHECK(std::abs(scan.points[i].dp_dlambda) == Catch::Approx(0.5).margin(1e-9));
        CHECK(scan.points[i].kind == RealPointClass::Kind::RemovableDouble);
    }
    // multiplier sign alternates: T(n) = (-1)^n Id
    CHECK(scan.points[0].sign == +1);
    CHECK(scan.points[1].sign == -1);
    CHECK(scan.points[2].sign == +1);
}

TEST_CASE("real double points for q = 1: 0 and +-sqrt(3)") {
    const PotentialSignal q = constant_potential(1.0);
    const DoublePointScan scan = find_real_double_points(q, -3.0, 3.0);
    REQUIRE(scan.points.size() == 3);
    CHECK(scan.points[0].lambda == Catch::Approx(-std::sqrt(3.0)).margin(1e-8));
    CHECK(scan.points[1].lambda == Catch::Approx(0.0).margin(1e-8));
    CHECK(scan.points[2].lambda == Catch::Approx(std::sqrt(3.0)).margin(1e-8));
    CHECK(std::abs(scan.points[0].dp_dlambda) == Catch::Approx(std::sqrt(3.0) / 4.0).margin(1e-8));
    CHECK(std::abs(scan.points[1].dp_dlambda) < 1e-8);
    CHECK(std::abs(scan.points[2].dp_dlambda) == Catch::Approx(std::sqrt(3.0) / 4.0).margin(1e-8));

    CHECK(find_real_double_points(q, 0.1, 1.5).points.empty());
}

TEST_CASE("asymptotics: double point near sqrt(n^2 - 1) for n = 10") {
    const PotentialSignal q = constant_potential(1.0);
    const DoublePointScan scan = find_real_double_points(q, 9.5, 10.3);
    REQUIRE(scan.points.size() == 1);
    CHECK(std::abs(scan.points[0].lambda - std::sqrt(99.0)) < 0.1);
    CHECK(std::abs(scan.points[0].lambda - 10.0) < 0.1); // eps-neighbourhood of the integer
}

TEST_CASE("bloch eigenvectors") {
    SECTION("free potential at lambda = 1/2: standard basis") {
        const PotentialSignal q = constant_potential(0.0, 64);
        const MonodromyResult m = monodromy(q, 0.5);
        auto [b1, b2] = bloch_eigenvectors(m);
        // eigenvectors are the coordinate axes; sum normalization keeps them
        CHECK(std::abs(b1.v.first + b1.v.second - 1.0) < 1e-9);
        CHECK(std::abs(b2.v.first + b2.v.second - 1.0) < 1e-9);
        const double axis1 = std::min(std::abs(b1.v.first), std::abs(b1.v.second));
        CHECK(axis1 < 1e-9);
    }
    SECTION("generic unitary: residual of the eigen equation is tiny") {
        const PotentialSignal q = constant_potential(1.0);
        const MonodromyResult m = monodromy(q, 0.7);
        auto [b1, b2] = bloch_eigenvectors(m);
        for (const auto& b : {b1, b2}) {
            const cplx r1 = m.T.m11 * b.v.first + m.T.m12 * b.v.second - b.w * b.v.first;
            const cplx r2 = m.T.m21 * b.v.first + m.T.m22 * b.v.second - b.w * b.v.second;
            CHECK(std::abs(r1) < 1e-9);
            CHECK(std::abs(r2) < 1e-9);
        }
        CHECK(std::abs(b1.w * b2.w - 1.0) < 1e-10);
    }
    SECTION("double point input is rejected") {
        const PotentialSignal q = constant_potential(1.0);
        const MonodromyResult m = monodromy(q, 0.0);
        CHECK_THROWS_AS(bloch_eigenvectors(m), validation_error);
    }
}

TEST_CASE("quasimomentum derivative closed forms for q = c") {
    const PotentialSignal q = constant_potential(1.0);
    SECTION("vanishes at lambda = 0") {
        auto [d1, d2] = quasimomentum_derivative(q, 0.0);
        CHECK(std::abs(d1) < 1e-8);
        CHECK(std::abs(d2) < 1e-8);
    }
    SECTION("equals +-sqrt(3)/4 at lambda = sqrt(3)") {
        auto [d1, d2] = quasimomentum_derivative(q, std::sqrt(3.0));
        CHECK(std::abs(d1) == Catch::Approx(std::sqrt(3.0) / 4.0).margin(1e-8));
        CHECK(d2 == Catch::Approx(-d1).margin(1e-12));
    }
    SECTION("regular points match p = -sqrt(lambda^2+1)/2") {
        for (double lam : {0.4, 0.9, 1.2, 2.2}) {
            auto [d1, d2] = quasimomentum_derivative(q, lam);
            const double exact = lam / (2.0 * std::hypot(lam, 1.0));
            CHECK(std::abs(d1) == Catch::Approx(exact).margin(1e-9));
            CHECK(d1 == Catch::Approx(-d2).margin(1e-12));
        }
    }
    SECTION("free potential: +-1/2 everywhere") {
        const PotentialSignal q0 = constant_potential(0.0, 64);
        for (double lam : {0.3, 0.5, 1.7}) {
            auto [d1, d2] = quasimomentum_derivative(q0, lam);
            CHECK(std::abs(d1) == Catch::Approx(0.5).margin(1e-10));
            CHECK(std::abs(d2) == Catch::Approx(0.5).margin(1e-10));
        }
    }
}

TEST_CASE("dp formula matches finite differences of the local quasimomentum branch") {
    const PotentialSignal q = constant_potential(1.0);
    for (double lam : {0.3, 0.8, 1.1, 1.5, 2.5}) {
        auto [d1, d2] = quasimomentum_derivative(q, lam);
        (void)d2;
        const double h = 1e-4;
        auto ploc = [&](double x) {
            const MonodromyResult m = monodromy(q, x);
            double c = m.discriminant.real() / 2.0;
            c = std::clamp(c, -1.0, 1.0);
            return std::acos(c) / two_pi;
        };
        const double fd = (ploc(lam + h) - ploc(lam - h)) / (2.0 * h);
        CHECK(std::abs(std::abs(fd) - std::abs(d1)) < 1e-5 * std::max(1.0, std::abs(d1)));
    }
}

TEST_CASE("double point bilinear integral vanishes") {
    const PotentialSignal q = constant_potential(1.0);
    CHECK(double_point_integral_check(q, 0.0) < 1e-8);
    CHECK(double_point_integral_check(q, std::sqrt(3.0)) < 1e-8);
    const PotentialSignal q0 = constant_potential(0.0, 64);
    CHECK(double_point_integral_check(q0, 1.0) < 1e-12);
    CHECK_THROWS_AS(double_point_integral_check(q, 0.5), validation_error);
}

TEST_CASE("closure check verdicts for q = 1") {
    const PotentialSignal q = constant_potential(1.0);
    SECTION("lambda0 = 0: closed") {
        const ClosureReport r = closure_check(q, 0.0);
        CHECK(r.verdict == ClosureVerdict::Closed);
        CHECK(r.is_double_point);
        CHECK(std::abs(r.a) < 1e-8);
        CHECK(std::abs(r.b) < 1e-8);
    }
    SECTION("lambda0 = sqrt(3): frame periodic, not closed, gap pi sqrt(3)") {
        const ClosureReport r = closure_check(q, std::sqrt(3.0));
        CHECK(r.verdict == ClosureVerdict::FramePeriodicNotClosed);
        CHECK(r.closure_gap ==
              Catch::Approx(std::numbers::pi * std::sqrt(3.0)).margin(1e-6));
        CHECK(std::abs(r.b) < 1e-8);
        // a = -4 pi i dp: purely imaginary diagonal defect
        CHECK(std::abs(r.a.real()) < 1e-10);
        CHECK(std::abs(std::abs(r.a.imag()) - 4.0 * std::numbers::pi * std::abs(r.dp_dlambda)) < 1e-9);
    }
    SECTION("lambda0 = 0.5: not frame periodic") {
        const ClosureReport r = closure_check(q, 0.5);
        CHECK(r.verdict == ClosureVerdict::NotFramePeriodic);
        CHECK_FALSE(r.is_double_point);
    }
}
