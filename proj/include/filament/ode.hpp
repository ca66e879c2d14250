#pragma once

// Fixed-step RK4 propagators for the first-order 2x2 system
// F' = U(x, lambda) F, U = [[-i lambda/2, i q/2], [i conj(q)/2, i lambda/2]],
// with Richardson step-halving error control. Dense output lands on the
// sample grid. Also: transport of a base point for curve reconstruction,
// with periodic re-projection onto the unitary group.

#include <cstddef>
#include <vector>

#include "filament/errors.hpp"
#include "filament/fourier.hpp"
#include "filament/potential.hpp"
#include "filament/su2.hpp"

namespace filament {

namespace detail {

inline Mat2C zs_matrix(const cplx& q, const cplx& lambda) {
    const cplx ih(0.0, 0.5);
    return {-ih * lambda, ih * q, ih * std::conj(q), ih * lambda};
}

inline std::size_t pick_steps(std::size_t n, double lambda_abs, double qmax, std::size_t n_nodes) {
    double want = std::max({2.0 * static_cast<double>(n), 256.0, 16.0 * (lambda_abs + qmax + 1.0)});
    std::size_t base = n_nodes ? n_nodes : 1;
    std::size_t m = base;
    while (static_cast<double>(m) < want) m *= 2;
    return m;
}

// First direction vector of the conjugated basis, Omega^{-1} I Omega.
inline Vec3 frame_e1(const Mat2C& omega) {
    const Mat2C e = omega.inverse() * quat_I() * omega;
    return {skew_inner(e, quat_I()), skew_inner(e, quat_J()), skew_inner(e, quat_K())};
}

} // namespace detail

struct ZSPropagation {
    Mat2C T;                      // Phi(2pi), monodromy when q is periodic
    Mat2C T_lambda;               // dPhi/dlambda at 2pi (if requested)
    std::vector<Mat2C> nodes;     // Phi at x_j = 2pi j / n_nodes (if requested)
    double err_estimate = 0.0;
    std::size_t steps = 0;
};

// Propagate Phi' = U Phi, Phi(0) = Id over one period; optionally the
// variational system Psi' = U Psi + (dU/dlambda) Phi, Psi(0) = 0.
inline ZSPropagation zs_propagate(const std::vector<cplx>& q, const cplx& lambda,
                                  double tol = 1e-11, bool with_dlambda = false,
                                  std::size_t n_nodes = 0) {
    if (!finite(lambda)) throw validation_error("zs_propagate: non-finite lambda");
    double qmax = 0.0;
    for (const auto& v : q) qmax = std::max(qmax, std::abs(v));
    const Mat2C dU = {cplx(0.0, -0.5), 0.0, 0.0, cplx(0.0, 0.5)};

    auto run = [&](std::size_t m, std::vector<Mat2C>* nodes_out) {
        const std::vector<cplx> qf = spectral_refine(q, 2 * m);
        const double h = two_pi / static_cast<double>(m);
        Mat2C phi = Mat2C::identity();
        Mat2C psi = Mat2C::zero();
        const std::size_t node_stride = n_nodes ? m / n_nodes : 0;
        if (nodes_out) {
            nodes_out->clear();
            nodes_out->reserve(n_nodes);
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (nodes_out && node_stride && j % node_stride == 0) nodes_out->push_back(phi);
            const Mat2C u0 = detail::zs_matrix(qf[(2 * j) % (2 * m)], lambda);
            const Mat2C uh = detail::zs_matrix(qf[(2 * j + 1) % (2 * m)], lambda);
            const Mat2C u1 = detail::zs_matrix(qf[(2 * j + 2) % (2 * m)], lambda);
            const Mat2C k1 = u0 * phi;
            const Mat2C k2 = uh * (phi + (0.5 * h) * k1);
            const Mat2C k3 = uh * (phi + (0.5 * h) * k2);
            const Mat2C k4 = u1 * (phi + h * k3);
            if (with_dlambda) {
                const Mat2C l1 = u0 * psi + dU * phi;
                const Mat2C l2 = uh * (psi + (0.5 * h) * l1) + dU * (phi + (0.5 * h) * k1);
                const Mat2C l3 = uh * (psi + (0.5 * h) * l2) + dU * (phi + (0.5 * h) * k2);
                const Mat2C l4 = u1 * (psi + h * l3) + dU * (phi + h * k3);
                psi = psi + (h / 6.0) * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
            }
            phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return std::pair<Mat2C, Mat2C>(phi, psi);
    };

    std::size_t m = detail::pick_steps(q.size(), std::abs(lambda), qmax, n_nodes);
    auto coarse = run(m, nullptr);
    for (;;) {
        auto fine = run(2 * m, nullptr);
        const double err = (fine.first - coarse.first).norm_fro() / 15.0;
        if (err < tol || 2 * m >= (std::size_t(1) << 21)) {
            if (err >= 100.0 * tol)
                throw numerical_error(
                    "zs_propagate: requested accuracy unattainable (lambda too large for the "
                    "step cap); |lambda| = " + std::to_string(std::abs(lambda)));
            ZSPropagation out;
            std::vector<Mat2C> nodes;
            if (n_nodes) {
                auto redo = run(2 * m, &nodes); // dense pass on the accepted grid
                out.T = redo.first;
                out.T_lambda = redo.second;
            } else {
                out.T = fine.first;
                out.T_lambda = fine.second;
            }
            out.nodes = std::move(nodes);
            out.err_estimate = err;
            out.steps = 2 * m;
            return out;
        }
        coarse = fine;
        m *= 2;
    }
}

struct FrameTransport {
    std::vector<Mat2C> omega_nodes;  // Omega at x_j = 2pi j / N, plus x = 2pi at the back
    std::vector<Vec3> gamma_nodes;   // curve points at the same nodes
    Mat2C omega_end;
    Vec3 gamma_end;
    double unitarity_drift = 0.0;    // max ||Omega* Omega - Id|| seen before projections
    double err_estimate = 0.0;
    std::size_t steps = 0;
};

// Transport Omega' = U(x, lambda0) Omega together with gamma' = e1(Omega),
// re-projecting Omega onto U(2) every projection_interval steps.
inline FrameTransport frame_transport(const std::vector<cplx>& q, double lambda0,
                                      const Mat2C& omega0, const Vec3& gamma0,
                                      double tol = 1e-11, int projection_interval = 16) {
    if (!omega0.is_unitary(1e-8))
        throw validation_error("frame_transport: omega0 is not unitary");
    const std::size_t n = q.size();
    double qmax = 0.0;
    for (const auto& v : q) qmax = std::max(qmax, std::abs(v));

    auto run = [&](std::size_t m, FrameTransport* full) {
        const std::vector<cplx> qf = spectral_refine(q, 2 * m);
        const double h = two_pi / static_cast<double>(m);
        Mat2C omega = omega0;
        Vec3 gamma = gamma0;
        double drift = 0.0;
        const std::size_t node_stride = m / n;
        for (std::size_t j = 0; j < m; ++j) {
            if (full && j % node_stride == 0) {
                full->omega_nodes.push_back(omega);
                full->gamma_nodes.push_back(gamma);
            }
            const Mat2C u0 = detail::zs_matrix(qf[(2 * j) % (2 * m)], lambda0);
            const Mat2C uh = detail::zs_matrix(qf[(2 * j + 1) % (2 * m)], lambda0);
            const Mat2C u1 = detail::zs_matrix(qf[(2 * j + 2) % (2 * m)], lambda0);
            const Mat2C k1 = u0 * omega;
            const Vec3 g1 = detail::frame_e1(omega);
            const Mat2C s2 = omega + (0.5 * h) * k1;
            const Mat2C k2 = uh * s2;
            const Vec3 g2 = detail::frame_e1(s2);
            const Mat2C s3 = omega + (0.5 * h) * k2;
            const Mat2C k3 = uh * s3;
            const Vec3 g3 = detail::frame_e1(s3);
            const Mat2C s4 = omega + h * k3;
            const Mat2C k4 = u1 * s4;
            const Vec3 g4 = detail::frame_e1(s4);
            omega = omega + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            gamma = gamma + (h / 6.0) * (g1 + 2.0 * g2 + 2.0 * g3 + g4);
            if (projection_interval > 0 && (j + 1) % static_cast<std::size_t>(projection_interval) == 0) {
                drift = std::max(drift, (omega.adjoint() * omega - Mat2C::identity()).norm_fro());
                omega = unitary_project(omega);
            }
        }
        if (full) {
            full->omega_nodes.push_back(omega);
            full->gamma_nodes.push_back(gamma);
            full->unitarity_drift = std::max(
                drift, (omega.adjoint() * omega - Mat2C::identity()).norm_fro());
        }
        return std::pair<Mat2C, Vec3>(omega, gamma);
    };

    std::size_t m = detail::pick_steps(n, std::abs(lambda0), qmax, n);
    auto coarse = run(m, nullptr);
    for (;;) {
        auto fine = run(2 * m, nullptr);
        const double err = ((fine.first - coarse.first).norm_fro() +
                            norm(fine.second - coarse.second)) / 15.0;
        if (err < tol || 2 * m >= (std::size_t(1) << 21)) {
            if (err >= 100.0 * tol)
                throw numerical_error("frame_transport: requested accuracy unattainable");
            FrameTransport out;
            auto redo = run(2 * m, &out);
            out.omega_end = redo.first;
            out.gamma_end = redo.second;
            out.err_estimate = err;
            out.steps = 2 * m;
            return out;
        }
        coarse = fine;
        m *= 2;
    }
}

} // namespace filament
