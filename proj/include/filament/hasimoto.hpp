#pragma once

// The Hasimoto correspondence in both directions. Forward: a framed
// curve maps to q(s) = k(s) e^{i theta(s)} with Floquet phase
// phi = int kappa over one period. Inverse: a periodic potential and a
// real spectral point Lambda0 reconstruct a unit-speed curve by
// transporting a unitary frame and integrating its first direction
// vector. With our operator conventions the reconstructed curve has
// curvature |q(x)| and torsion Lambda0 + d/dx arg q(x).

#include <vector>

#include "filament/bloch.hpp"
#include "filament/curve.hpp"
#include "filament/errors.hpp"
#include "filament/ode.hpp"
#include "filament/potential.hpp"
#include "filament/su2.hpp"

namespace filament {

inline PotentialSignal hasimoto_forward(const FrameField& frames, double curvature_floor = 1e-10) {
    const std::size_t n = frames.n();
    if (n < 16) throw validation_error("hasimoto_forward: too few frame samples");
    for (double k : frames.curvature)
        if (!(k > curvature_floor))
            throw validation_error("hasimoto_forward: curvature below floor");

    std::vector<double> theta;
    if (frames.variant == FrameField::Variant::Rotated && !frames.theta.empty()) {
        theta = frames.theta;
    } else {
        theta = integrate_torsion(frames, 0.0);
    }

    PotentialSignal q;
    q.samples.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        q.samples[j] = frames.curvature[j] * cplx(std::cos(theta[j]), std::sin(theta[j]));
    const double phi_raw = torsion_period_integral(frames);
    auto [phi, w] = reduce_angle(phi_raw);
    q.phase = phi;
    q.winding = w;
    q.gauge_shift = 0.0;
    return q;
}

struct ReconstructionConfig {
    double lambda0 = 0.0;
    Mat2C omega0 = Mat2C::identity();
    Vec3 gamma0{};
    double tol = 1e-11;            // integrator tolerance
    int projection_interval = 16;  // unitary re-projection cadence, in steps
};

struct ReconstructionResult {
    SampledCurve curve;        // gamma at x_j = 2pi j / N over one period
    FrameField frames;         // rotated-variant frame with k, kappa, theta
    Vec3 gap{};                // gamma(2pi) - gamma(0)
    Mat2C omega_end;
    double unitarity_drift = 0.0;
};

namespace detail {

inline void validate_reconstruction_input(const PotentialSignal& q,
                                          const ReconstructionConfig& cfg, const char* who) {
    q.validate(who);
    if (!q.periodic())
        throw validation_error(std::string(who) + ": potential is quasi-periodic; apply gauge first");
    q.require_nonvanishing(who);
    if (!finite(cfg.lambda0)) throw validation_error(std::string(who) + ": non-finite lambda0");
    if (!cfg.omega0.is_unitary(1e-8))
        throw validation_error(std::string(who) + ": omega0 is not unitary");
}

} // namespace detail

// Lemma-style reconstruction: transport Omega with L(Lambda0) Omega = 0,
// take e_a(x) = vec(Omega^-1 E_a Omega) and gamma(x) = gamma0 + int e_1.
inline ReconstructionResult reconstruct_curve(const PotentialSignal& q,
                                              const ReconstructionConfig& cfg) {
    detail::validate_reconstruction_input(q, cfg, "reconstruct_curve");
    const std::size_t n = q.n();

    FrameTransport ft = frame_transport(q.samples, cfg.lambda0, cfg.omega0, cfg.gamma0,
                                        cfg.tol, cfg.projection_interval);
    if (ft.unitarity_drift > 1e-7)
        throw numerical_error("reconstruct_curve: unitarity drift beyond 10x tolerance");

    ReconstructionResult out;
    out.omega_end = ft.omega_end;
    out.unitarity_drift = ft.unitarity_drift;
    out.gap = ft.gamma_end - ft.gamma_nodes.front();

    out.curve.points.assign(ft.gamma_nodes.begin(), ft.gamma_nodes.begin() + n);
    out.curve.closed = norm(out.gap) < 1e-8;
    out.curve.scale = 1.0;

    // curvature and torsion come from the potential side: the Hasimoto
    // image of the output is e^{i Lambda0 x} q(x), so k = |q| and
    // kappa = Lambda0 + Im(q'/q).
    FrameField& ff = out.frames;
    ff.variant = FrameField::Variant::Rotated;
    ff.periodic_data = true;
    ff.e1.resize(n);
    ff.e2.resize(n);
    ff.e3.resize(n);
    ff.curvature.resize(n);
    ff.torsion.resize(n);
    ff.theta.resize(n);

    const std::vector<cplx> qd = spectral_derivative(q.samples, 1);
    std::vector<double> arg_rate(n);
    for (std::size_t j = 0; j < n; ++j) arg_rate[j] = (qd[j] / q.samples[j]).imag();
    const double rate_mean = mean(arg_rate);
    const std::vector<cplx> arg_per = periodic_antiderivative(
        std::vector<cplx>(arg_rate.begin(), arg_rate.end()));
    const double theta0 = std::arg(q.samples[0]);

    for (std::size_t j = 0; j < n; ++j) {
        const double x = two_pi * static_cast<double>(j) / static_cast<double>(n);
        ff.curvature[j] = std::abs(q.samples[j]);
        ff.torsion[j] = cfg.lambda0 + arg_rate[j];
        ff.theta[j] = theta0 + cfg.lambda0 * x + rate_mean * x + arg_per[j].real();
        const Mat2C& om = ft.omega_nodes[j];
        const Mat2C inv = om.inverse();
        ff.e1[j] = {skew_inner(inv * quat_I() * om, quat_I()),
                    skew_inner(inv * quat_I() * om, quat_J()),
                    skew_inner(inv * quat_I() * om, quat_K())};
        ff.e2[j] = {skew_inner(inv * quat_J() * om, quat_I()),
                    skew_inner(inv * quat_J() * om, quat_J()),
                    skew_inner(inv * quat_J() * om, quat_K())};
        ff.e3[j] = {skew_inner(inv * quat_K() * om, quat_I()),
                    skew_inner(inv * quat_K() * om, quat_J()),
                    skew_inner(inv * quat_K() * om, quat_K())};
    }
    return out;
}

struct FrameClosureTest {
    bool frame_periodic = false;
    bool curve_closed = false;
    Vec3 gap{};
};

// Closure test of the reconstructed curve. Frame periodicity is decided
// algebraically from the monodromy (E1 is 2pi-periodic iff T = +-Id;
// conjugation by the Floquet diagonal fixes E1 only then), so no second
// period is integrated. The gap is the quadrature of e_1 over one period.
inline FrameClosureTest closure_test_frame(const PotentialSignal& q,
                                           const ReconstructionConfig& cfg,
                                           double gap_tol = 1e-8) {
    detail::validate_reconstruction_input(q, cfg, "closure_test_frame");
    FrameClosureTest out;
    const MonodromyResult m = monodromy(q, cfg.lambda0, cfg.tol);
    const double dist = std::min((m.T - Mat2C::identity()).norm_fro(),
                                 (m.T + Mat2C::identity()).norm_fro());
    out.frame_periodic = dist < 1e-6;
    const ReconstructionResult rec = reconstruct_curve(q, cfg);
    out.gap = rec.gap;
    out.curve_closed = out.frame_periodic && norm(out.gap) < gap_tol;
    return out;
}

} // namespace filament
