#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "filament/su2.hpp"

using namespace filament;

namespace {

double mat_dist(const Mat2C& a, const Mat2C& b) { return (a - b).norm_max(); }

// deterministic random unitary from two angles and a phase split
Mat2C random_unitary(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ang(0.0, two_pi);
    const double a = ang(rng), b = ang(rng), c = ang(rng);
    const cplx u = std::cos(a) * cplx(std::cos(b), std::sin(b));
    const cplx v = std::sin(a) * cplx(std::cos(c), std::sin(c));
    return {u, -std::conj(v), v, std::conj(u)};
}

Vec3 random_vec(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    return {d(rng), d(rng), d(rng)};
}

} // namespace

TEST_CASE("quaternion multiplication table holds exactly") {
    const Mat2C I = quat_I(), J = quat_J(), K = quat_K();
    const Mat2C minus_id = Mat2C::identity() * (-1.0);
    CHECK(mat_dist(I * J, K) == 0.0);
    CHECK(mat_dist(J * I, K * (-1.0)) == 0.0);
    CHECK(mat_dist(J * K, I) == 0.0);
    CHECK(mat_dist(K * J, I * (-1.0)) == 0.0);
    CHECK(mat_dist(K * I, J) == 0.0);
    CHECK(mat_dist(I * K, J * (-1.0)) == 0.0);
    CHECK(mat_dist(I * I, minus_id) == 0.0);
    CHECK(mat_dist(J * J, minus_id) == 0.0);
    CHECK(mat_dist(K * K, minus_id) == 0.0);
}

TEST_CASE("vec_to_mat maps the standard basis to I, J, K") {
    CHECK(mat_dist(vec_to_mat({1, 0, 0}), quat_I()) == 0.0);
    CHECK(mat_dist(vec_to_mat({0, 1, 0}), quat_J()) == 0.0);
    CHECK(mat_dist(vec_to_mat({0, 0, 1}), quat_K()) == 0.0);
    CHECK(mat_dist(vec_to_mat({0, 0, 0}), Mat2C::zero()) == 0.0);
    // (0,1,1) -> J + K = [[0, -1-i], [1-i, 0]]
    const Mat2C jk = vec_to_mat({0, 1, 1});
    CHECK(mat_dist(jk, Mat2C{0.0, cplx(-1, -1), cplx(1, -1), 0.0}) == 0.0);
    CHECK(jk.is_skew_hermitian());
}

TEST_CASE("mat_to_vec inverts vec_to_mat") {
    CHECK(norm(mat_to_vec(quat_I()) - Vec3{1, 0, 0}) == 0.0);
    CHECK(norm(mat_to_vec(quat_K()) - Vec3{0, 0, 1}) == 0.0);
    const Vec3 w{0.3, -1.2, 2.0};
    CHECK(norm(mat_to_vec(vec_to_mat(w)) - w) < 1e-15);
}

TEST_CASE("mat_to_vec rejects non-skew-hermitian and non-finite input") {
    CHECK_THROWS_AS(mat_to_vec(Mat2C::identity()), validation_error);
    Mat2C bad = quat_J();
    bad.m11 = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(mat_to_vec(bad), validation_error);
    CHECK_THROWS_AS(vec_to_mat(Vec3{1.0, std::nan(""), 0.0}), validation_error);
}

TEST_CASE("isometry: skew inner product equals the Euclidean dot product") {
    std::mt19937_64 rng(12345);
    for (int i = 0; i < 64; ++i) {
        const Vec3 u = random_vec(rng), v = random_vec(rng);
        CHECK(skew_inner(vec_to_mat(u), vec_to_mat(v)) == Catch::Approx(dot(u, v)).margin(1e-14));
    }
}

TEST_CASE("conjugation by a unitary") {
    SECTION("identity fixes everything") {
        CHECK(mat_dist(conjugate(Mat2C::identity(), quat_J()), quat_J()) < 1e-15);
    }
    SECTION("I J I^-1 = -J, by direct multiplication") {
        const Mat2C r = conjugate(quat_I(), quat_J());
        CHECK(mat_dist(r, quat_J() * (-1.0)) < 1e-15);
    }
    SECTION("rejects non-unitary g") {
        CHECK_THROWS_AS(conjugate(quat_I() * 2.0, quat_J()), validation_error);
    }
    SECTION("preserves the scalar product and skew-hermiticity") {
        std::mt19937_64 rng(99);
        for (int i = 0; i < 32; ++i) {
            const Mat2C g = random_unitary(rng);
            const Mat2C X = vec_to_mat(random_vec(rng));
            const Mat2C Y = vec_to_mat(random_vec(rng));
            const Mat2C gX = conjugate(g, X), gY = conjugate(g, Y);
            CHECK(gX.is_skew_hermitian(1e-12));
            CHECK(skew_inner(gX, gY) == Catch::Approx(skew_inner(X, Y)).margin(1e-12));
        }
    }
    SECTION("maps (I,J,K) to an orthonormal triple") {
        std::mt19937_64 rng(7);
        const Mat2C g = random_unitary(rng);
        const Mat2C a = conjugate(g, quat_I());
        const Mat2C b = conjugate(g, quat_J());
        const Mat2C c = conjugate(g, quat_K());
        CHECK(skew_inner(a, a) == Catch::Approx(1.0).margin(1e-12));
        CHECK(skew_inner(b, b) == Catch::Approx(1.0).margin(1e-12));
        CHECK(skew_inner(c, c) == Catch::Approx(1.0).margin(1e-12));
        CHECK(skew_inner(a, b) == Catch::Approx(0.0).margin(1e-12));
        CHECK(skew_inner(a, c) == Catch::Approx(0.0).margin(1e-12));
        CHECK(skew_inner(b, c) == Catch::Approx(0.0).margin(1e-12));
    }
}

TEST_CASE("unitary projection restores unitarity") {
    std::mt19937_64 rng(3);
    const Mat2C g = random_unitary(rng);
    Mat2C drifted = g;
    drifted.m11 += 1e-6;
    drifted.m22 -= cplx(0.0, 2e-6);
    const Mat2C p = unitary_project(drifted);
    CHECK(p.is_unitary(1e-12));
    CHECK(mat_dist(p, g) < 1e-5);
}

TEST_CASE("2x2 eigen solve") {
    const Mat2C t{0.0, 1.0, -1.0, 0.0};
    auto [m1, m2] = eigenvalues2(t);
    CHECK(std::abs(m1 * m2 - t.det()) < 1e-14);
    for (const cplx& mu : {m1, m2}) {
        auto v = eigenvector2(t, mu);
        const cplx r1 = t.m11 * v.first + t.m12 * v.second - mu * v.first;
        const cplx r2 = t.m21 * v.first + t.m22 * v.second - mu * v.second;
        CHECK(std::abs(r1) < 1e-12);
        CHECK(std::abs(r2) < 1e-12);
    }
}
