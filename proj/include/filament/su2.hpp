#pragma once

// Small exact algebra layer: 2x2 complex matrices, the quaternion basis
// I, J, K of su(2), and the isometry between R^3 and skew-hermitian
// matrices equipped with <A,B> = -1/2 trace(AB).

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "filament/errors.hpp"

namespace filament {

using cplx = std::complex<double>;

constexpr double two_pi = 2.0 * std::numbers::pi;

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }

    bool is_finite() const { return finite(x) && finite(y) && finite(z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

struct Mat2C {
    cplx m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    static Mat2C identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2C zero() { return {}; }

    Mat2C operator+(const Mat2C& o) const { return {m11 + o.m11, m12 + o.m12, m21 + o.m21, m22 + o.m22}; }
    Mat2C operator-(const Mat2C& o) const { return {m11 - o.m11, m12 - o.m12, m21 - o.m21, m22 - o.m22}; }
    Mat2C operator*(const Mat2C& o) const {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    Mat2C operator*(const cplx& s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }
    Mat2C operator*(double s) const { return {m11 * s, m12 * s, m21 * s, m22 * s}; }

    cplx trace() const { return m11 + m22; }
    cplx det() const { return m11 * m22 - m12 * m21; }

    Mat2C adjoint() const {
        return {std::conj(m11), std::conj(m21), std::conj(m12), std::conj(m22)};
    }

    Mat2C inverse() const {
        const cplx d = det();
        if (std::abs(d) < 1e-300) throw numerical_error("Mat2C::inverse: singular matrix");
        return Mat2C{m22, -m12, -m21, m11} * (cplx(1.0) / d);
    }

    double norm_fro() const {
        return std::sqrt(std::norm(m11) + std::norm(m12) + std::norm(m21) + std::norm(m22));
    }
    double norm_max() const {
        return std::max(std::max(std::abs(m11), std::abs(m12)),
                        std::max(std::abs(m21), std::abs(m22)));
    }

    bool is_finite() const { return finite(m11) && finite(m12) && finite(m21) && finite(m22); }

    bool is_unitary(double tol = 1e-10) const {
        const Mat2C r = (*this) * adjoint() - identity();
        return r.norm_max() < tol;
    }
    bool is_skew_hermitian(double tol = 1e-10) const {
        const Mat2C r = (*this) + adjoint();
        return r.norm_max() < tol;
    }
    bool is_unimodular(double tol = 1e-10) const { return std::abs(det() - cplx(1.0)) < tol; }
};

inline Mat2C operator*(const cplx& s, const Mat2C& m) { return m * s; }
inline Mat2C operator*(double s, const Mat2C& m) { return m * s; }

// Quaternion basis of the skew-hermitian 2x2 matrices:
// I = i sigma_z, J = -i sigma_y, K = -i sigma_x.
inline Mat2C quat_I() { return {cplx(0, 1), 0.0, 0.0, cplx(0, -1)}; }
inline Mat2C quat_J() { return {0.0, -1.0, 1.0, 0.0}; }
inline Mat2C quat_K() { return {0.0, cplx(0, -1), cplx(0, -1), 0.0}; }

// <A,B> = -1/2 trace(AB); real for skew-hermitian arguments.
inline double skew_inner(const Mat2C& a, const Mat2C& b) {
    return -0.5 * (a.m11 * b.m11 + a.m12 * b.m21 + a.m21 * b.m12 + a.m22 * b.m22).real();
}

// w -> w1 I + w2 J + w3 K, a linear isometry onto skew-hermitian matrices.
inline Mat2C vec_to_mat(const Vec3& w) {
    if (!w.is_finite()) throw validation_error("vec_to_mat: non-finite input vector");
    return {cplx(0, w.x), cplx(-w.y, -w.z), cplx(w.y, -w.z), cplx(0, -w.x)};
}

// Inverse of vec_to_mat: w_a = -1/2 trace(W E_a).
inline Vec3 mat_to_vec(const Mat2C& w, double tol = 1e-10) {
    if (!w.is_finite()) throw validation_error("mat_to_vec: non-finite input matrix");
    if (!w.is_skew_hermitian(tol))
        throw validation_error("mat_to_vec: matrix not skew-hermitian within tolerance");
    return {skew_inner(w, quat_I()), skew_inner(w, quat_J()), skew_inner(w, quat_K())};
}

// x -> g x g^-1 for unitary g; preserves skew-hermiticity and skew_inner.
inline Mat2C conjugate(const Mat2C& g, const Mat2C& x, double tol = 1e-10) {
    if (!g.is_finite() || !x.is_finite()) throw validation_error("conjugate: non-finite input");
    if (!g.is_unitary(tol)) throw validation_error("conjugate: g is not unitary within tolerance");
    return g * x * g.inverse();
}

// Eigenvalues of a 2x2 matrix from trace/determinant.
inline std::pair<cplx, cplx> eigenvalues2(const Mat2C& m) {
    const cplx t = m.trace(), d = m.det();
    const cplx s = std::sqrt(t * t - 4.0 * d);
    return {0.5 * (t + s), 0.5 * (t - s)};
}

// Unit eigenvector of m for eigenvalue mu, from the better-conditioned
// row of (m - mu Id).
inline std::pair<cplx, cplx> eigenvector2(const Mat2C& m, const cplx& mu) {
    const cplx r1a = m.m11 - mu, r1b = m.m12;
    const cplx r2a = m.m21, r2b = m.m22 - mu;
    const double n1 = std::norm(r1a) + std::norm(r1b);
    const double n2 = std::norm(r2a) + std::norm(r2b);
    cplx va, vb;
    if (n1 >= n2) {
        va = r1b;
        vb = -r1a;
    } else {
        va = r2b;
        vb = -r2a;
    }
    const double n = std::sqrt(std::norm(va) + std::norm(vb));
    if (n < 1e-300) return {1.0, 0.0}; // m ~ mu*Id: every vector is an eigenvector
    return {va / n, vb / n};
}

// Polar projection onto U(2): m (m* m)^(-1/2), for 2x2 via the closed-form
// inverse square root of the hermitian positive factor.
inline Mat2C unitary_project(const Mat2C& m) {
    const Mat2C h = m.adjoint() * m; // hermitian positive definite
    const double t = h.trace().real();
    const double d = h.det().real();
    const double s = std::sqrt(std::max(d, 0.0));
    const double denom = std::sqrt(std::max(t + 2.0 * s, 1e-300));
    // (h + sqrt(det h) Id) / sqrt(trace h + 2 sqrt(det h)) is the square root of h
    const Mat2C sqrt_h = (h + Mat2C::identity() * s) * (1.0 / denom);
    return m * sqrt_h.inverse();
}

} // namespace filament
