#pragma once

// Sampled-curve calculus on the uniform grid s_j = 2pi j / N: arclength
// reparameterization, derivatives (spectral for closed curves, stencil
// based for open ones), Frenet data and the rotated frame.

#include <algorithm>
#include <string>
#include <vector>

#include "filament/errors.hpp"
#include "filament/fourier.hpp"
#include "filament/stencil.hpp"
#include "filament/su2.hpp"

namespace filament {

struct SampledCurve {
    std::vector<Vec3> points;   // gamma(s_j), s_j = 2pi j / N
    bool closed = true;         // declares gamma(s + 2pi) = gamma(s)
    double scale = 1.0;         // original length / 2pi after resampling

    std::size_t n() const { return points.size(); }

    void validate(const char* who) const {
        if (points.size() < 16) throw validation_error(std::string(who) + ": need at least 16 samples");
        for (const auto& p : points)
            if (!p.is_finite()) throw validation_error(std::string(who) + ": non-finite curve point");
    }
};

struct FrameField {
    enum class Variant { Frenet, Rotated };
    Variant variant = Variant::Frenet;
    bool periodic_data = true;            // curvature/torsion are 2pi-periodic
    std::vector<Vec3> e1, e2, e3;         // (v,n,b) for Frenet, (e1,e2,e3) for Rotated
    std::vector<double> curvature;        // k(s_j) > 0
    std::vector<double> torsion;          // kappa(s_j)
    std::vector<double> theta;            // filled for the Rotated variant

    std::size_t n() const { return e1.size(); }
};

namespace detail {

inline std::vector<Vec3> curve_derivative(const std::vector<Vec3>& pts, bool closed, int order) {
    const std::size_t n = pts.size();
    std::vector<Vec3> out(n);
    if (closed) {
        std::vector<cplx> comp(n);
        for (int c = 0; c < 3; ++c) {
            for (std::size_t j = 0; j < n; ++j)
                comp[j] = (c == 0 ? pts[j].x : c == 1 ? pts[j].y : pts[j].z);
            const std::vector<cplx> d = spectral_derivative(comp, order);
            for (std::size_t j = 0; j < n; ++j) {
                double* f = (c == 0 ? &out[j].x : c == 1 ? &out[j].y : &out[j].z);
                *f = d[j].real();
            }
        }
    } else {
        out = stencil_derivative(pts, order);
    }
    return out;
}

} // namespace detail

// Enforce the natural parameter: redistribute nodes so that arclength is
// uniform, rescale total length to 2pi, and record the scale factor.
inline SampledCurve resample_arclength(const SampledCurve& curve) {
    curve.validate("resample_arclength");
    if (!curve.closed)
        throw validation_error("resample_arclength: requires a closed curve (spectral interpolation)");
    const std::size_t n = curve.n();

    TrigInterpolant ix([&] {
        std::vector<cplx> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = curve.points[j].x;
        return v;
    }());
    TrigInterpolant iy([&] {
        std::vector<cplx> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = curve.points[j].y;
        return v;
    }());
    TrigInterpolant iz([&] {
        std::vector<cplx> v(n);
        for (std::size_t j = 0; j < n; ++j) v[j] = curve.points[j].z;
        return v;
    }());

    // speed sigma(t) = |gamma'(t)| on the original parameter grid
    const std::vector<Vec3> d1 = detail::curve_derivative(curve.points, true, 1);
    std::vector<cplx> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = norm(d1[j]);
        if (s < 1e-12)
            throw validation_error("resample_arclength: tangent vanishes at a node");
        sigma[j] = s;
    }

    // cumulative arclength ell(t) = mean(sigma) t + periodic part
    const double sig_mean = mean(sigma).real();
    const std::vector<cplx> per = periodic_antiderivative(sigma);
    TrigInterpolant iper(per);
    TrigInterpolant isig(sigma);
    auto ell = [&](double t) { return sig_mean * t + (iper(t) - iper(0.0)).real(); };
    const double total_len = sig_mean * two_pi;
    if (!(total_len > 0.0)) throw validation_error("resample_arclength: nonpositive length");

    // invert ell by safeguarded Newton on the spectral interpolant
    SampledCurve out;
    out.closed = true;
    out.scale = total_len / two_pi;
    out.points.resize(n);
    const double geom_scale = two_pi / total_len;
    double t = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double target = total_len * static_cast<double>(j) / static_cast<double>(n);
        double lo = t, hi = two_pi;
        for (int it = 0; it < 60; ++it) {
            const double r = ell(t) - target;
            if (std::abs(r) < 1e-13 * std::max(1.0, total_len)) break;
            if (r > 0.0) hi = t;
            else lo = t;
            const double sp = isig(t).real();
            double tn = t - r / std::max(sp, 1e-12);
            if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
            t = tn;
        }
        out.points[j] = Vec3{ix(t).real(), iy(t).real(), iz(t).real()} * geom_scale;
    }
    return out;
}

// Max deviation of |gamma'| from 1 at the nodes.
inline double unit_speed_defect(const SampledCurve& curve) {
    const std::vector<Vec3> d1 = detail::curve_derivative(curve.points, curve.closed, 1);
    double worst = 0.0;
    for (const auto& v : d1) worst = std::max(worst, std::abs(norm(v) - 1.0));
    return worst;
}

// Frenet frame (v,n,b) with curvature and torsion of a unit-speed curve.
// Closed curves use spectral differentiation; open curves fall back to
// high-order stencils.
inline FrameField frenet_data(const SampledCurve& curve, double curvature_floor = 1e-10) {
    curve.validate("frenet_data");
    const std::size_t n = curve.n();
    if (unit_speed_defect(curve) > 1e-6)
        throw validation_error("frenet_data: curve is not unit speed (resample first)");

    const std::vector<Vec3> v = detail::curve_derivative(curve.points, curve.closed, 1);
    const std::vector<Vec3> w = detail::curve_derivative(curve.points, curve.closed, 2);
    const std::vector<Vec3> w3 = detail::curve_derivative(curve.points, curve.closed, 3);

    FrameField ff;
    ff.variant = FrameField::Variant::Frenet;
    ff.periodic_data = curve.closed;
    ff.e1.resize(n);
    ff.e2.resize(n);
    ff.e3.resize(n);
    ff.curvature.resize(n);
    ff.torsion.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double k = norm(w[j]);
        if (k < curvature_floor)
            throw validation_error("frenet_data: vanishing curvature, frame undefined");
        ff.curvature[j] = k;
        ff.e1[j] = v[j];
        ff.e2[j] = w[j] * (1.0 / k);
        ff.e3[j] = cross(v[j], ff.e2[j]);
        // torsion of a unit-speed curve: <v x gamma'', gamma'''> / k^2
        ff.torsion[j] = dot(cross(v[j], w[j]), w3[j]) / (k * k);
    }
    return ff;
}

// theta(s) = theta0 + int_0^s kappa, with the path-appropriate quadrature.
inline std::vector<double> integrate_torsion(const FrameField& ff, double theta0) {
    const std::size_t n = ff.n();
    std::vector<double> theta(n);
    if (ff.periodic_data) {
        std::vector<cplx> kap(ff.torsion.begin(), ff.torsion.end());
        const double m = mean(ff.torsion);
        const std::vector<cplx> per = periodic_antiderivative(kap);
        for (std::size_t j = 0; j < n; ++j)
            theta[j] = theta0 + m * (two_pi * static_cast<double>(j) / static_cast<double>(n)) + per[j].real();
    } else {
        auto [cum, full] = stencil_cumulative(ff.torsion);
        (void)full;
        for (std::size_t j = 0; j < n; ++j) theta[j] = theta0 + cum[j];
    }
    return theta;
}

// Total torsion integral over one period.
inline double torsion_period_integral(const FrameField& ff) {
    if (ff.periodic_data) return mean(ff.torsion) * two_pi;
    return stencil_cumulative(ff.torsion).second;
}

// Rotated frame e1 = v, e2 = cos(theta) n - sin(theta) b,
// e3 = sin(theta) n + cos(theta) b with theta' = kappa, theta(0) = theta0.
inline FrameField rotated_frame(const FrameField& frames, double theta0 = 0.0) {
    if (frames.variant != FrameField::Variant::Frenet)
        throw validation_error("rotated_frame: expects Frenet-variant input");
    FrameField out;
    out.variant = FrameField::Variant::Rotated;
    out.periodic_data = frames.periodic_data;
    out.curvature = frames.curvature;
    out.torsion = frames.torsion;
    out.theta = integrate_torsion(frames, theta0);
    const std::size_t n = frames.n();
    out.e1.resize(n);
    out.e2.resize(n);
    out.e3.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double c = std::cos(out.theta[j]), s = std::sin(out.theta[j]);
        out.e1[j] = frames.e1[j];
        out.e2[j] = frames.e2[j] * c - frames.e3[j] * s;
        out.e3[j] = frames.e2[j] * s + frames.e3[j] * c;
    }
    return out;
}

// Largest Gram-matrix deviation from identity over all frame triples.
inline double orthonormality_defect(const FrameField& ff) {
    double worst = 0.0;
    for (std::size_t j = 0; j < ff.n(); ++j) {
        const Vec3& a = ff.e1[j];
        const Vec3& b = ff.e2[j];
        const Vec3& c = ff.e3[j];
        worst = std::max({worst, std::abs(dot(a, a) - 1.0), std::abs(dot(b, b) - 1.0),
                          std::abs(dot(c, c) - 1.0), std::abs(dot(a, b)), std::abs(dot(a, c)),
                          std::abs(dot(b, c))});
    }
    return worst;
}

} // namespace filament
