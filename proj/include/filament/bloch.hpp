#pragma once

// Floquet theory of the Zakharov-Shabat operator over one period:
// monodromy matrix and discriminant, classification of real spectral
// points, Bloch eigenvectors, the quasimomentum derivative, and the
// closure criterion (double point + vanishing dp on both sheets).

#include <algorithm>
#include <string>
#include <thread>
#include <vector>

#include "filament/errors.hpp"
#include "filament/ode.hpp"
#include "filament/potential.hpp"
#include "filament/su2.hpp"

namespace filament {

struct MonodromyResult {
    cplx lambda{};
    Mat2C T;
    Mat2C T_lambda;                // dT/dlambda (when computed, else zero)
    cplx discriminant{};           // tr T
    cplx w1{}, w2{};               // Floquet multipliers, w1 w2 = 1
    double err_estimate = 0.0;
    std::vector<Mat2C> nodes;      // Phi at the sample nodes (when requested)
};

// Multipliers from w^2 - Delta w + 1 = 0, ordered deterministically:
// the root in the closed lower half-plane first (ties broken by real part).
inline std::pair<cplx, cplx> floquet_multipliers(const cplx& delta) {
    const cplx s = std::sqrt(delta * delta - 4.0);
    cplx w1 = 0.5 * (delta + s);
    cplx w2 = 0.5 * (delta - s);
    // the smaller root computed stably from the product w1 w2 = 1
    if (std::abs(w1) > std::abs(w2)) w2 = 1.0 / w1;
    else w1 = 1.0 / w2;
    const bool swap = (w1.imag() > w2.imag()) ||
                      (w1.imag() == w2.imag() && w1.real() < w2.real());
    if (swap) std::swap(w1, w2);
    return {w1, w2};
}

inline MonodromyResult monodromy(const PotentialSignal& q, const cplx& lambda,
                                 double tol = 1e-11, bool with_dlambda = false,
                                 bool with_nodes = false) {
    q.validate("monodromy");
    if (!q.periodic())
        throw validation_error("monodromy: potential is quasi-periodic; apply gauge first");
    ZSPropagation prop =
        zs_propagate(q.samples, lambda, tol, with_dlambda, with_nodes ? q.n() : 0);
    MonodromyResult out;
    out.lambda = lambda;
    out.T = prop.T;
    out.T_lambda = prop.T_lambda;
    out.discriminant = prop.T.trace();
    auto [w1, w2] = floquet_multipliers(out.discriminant);
    out.w1 = w1;
    out.w2 = w2;
    out.err_estimate = prop.err_estimate;
    out.nodes = std::move(prop.nodes);
    return out;
}

inline std::vector<std::pair<double, cplx>> discriminant_scan(const PotentialSignal& q,
                                                              std::vector<double> grid,
                                                              double tol = 1e-11,
                                                              int threads = 1) {
    q.validate("discriminant_scan");
    if (!q.periodic())
        throw validation_error("discriminant_scan: potential is quasi-periodic; apply gauge first");
    std::sort(grid.begin(), grid.end());
    std::vector<std::pair<double, cplx>> out(grid.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const ZSPropagation p = zs_propagate(q.samples, grid[i], tol, false, 0);
            out[i] = {grid[i], p.T.trace()};
        }
    };
    if (threads <= 1 || grid.size() < 8) {
        work(0, grid.size());
    } else {
        const std::size_t nt = std::min<std::size_t>(threads, grid.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (grid.size() + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(grid.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

struct BlochVector {
    cplx w{};                      // multiplier
    std::pair<cplx, cplx> v{};     // eigenvector
    bool sum_normalized = false;   // true when v1+v2 = 1 was achievable
};

// Eigenvectors of the monodromy with the component-sum normalization;
// falls back to unit Euclidean norm when the sum degenerates. The
// multiplier separation tolerance reflects the sqrt amplification of the
// integrator error near |Delta| = 2.
inline std::pair<BlochVector, BlochVector> bloch_eigenvectors(const MonodromyResult& m,
                                                              double tol = 1e-5) {
    if (std::abs(m.w1 - m.w2) < tol)
        throw validation_error("bloch_eigenvectors: double point, eigenvectors coincide");
    auto make = [&](const cplx& w) {
        BlochVector bv;
        bv.w = w;
        auto v = eigenvector2(m.T, w);
        const cplx s = v.first + v.second;
        if (std::abs(s) > 1e-8) {
            bv.v = {v.first / s, v.second / s};
            bv.sum_normalized = true;
        } else {
            bv.v = v; // already unit norm
            bv.sum_normalized = false;
        }
        return bv;
    };
    return {make(m.w1), make(m.w2)};
}

enum class ClosureVerdict { NotFramePeriodic, FramePeriodicNotClosed, Closed };

inline const char* to_string(ClosureVerdict v) {
    switch (v) {
        case ClosureVerdict::NotFramePeriodic: return "NotFramePeriodic";
        case ClosureVerdict::FramePeriodicNotClosed: return "FramePeriodicNotClosed";
        default: return "Closed";
    }
}

struct ClosureReport {
    double lambda0 = 0.0;
    bool is_double_point = false;
    int sign = 0;                   // multiplier sign at a double point
    cplx a{}, b{};                  // diagonal / off-diagonal defects
    double closure_gap = 0.0;       // |a|
    double dp_dlambda = 0.0;        // on the sheet of the used Bloch direction
    bool degenerate_direction = false; // ||T'|| ~ 0, fell back to the standard basis
    ClosureVerdict verdict = ClosureVerdict::NotFramePeriodic;
};

namespace detail {

struct RealPointAnalysis {
    MonodromyResult mono;
    bool is_double = false;
    int sign = 0;
    bool degenerate_direction = false;
    std::pair<cplx, cplx> dir{};    // Bloch direction at the point
    double dp = 0.0;                // quasimomentum derivative on that sheet
    cplx a{}, b{};                  // closure integrals (double points only)
    double wronskian = 0.0;
};

// Shared spectral analysis at a real lambda. The Bloch direction comes
// from the monodromy eigenvectors at regular points and from the
// eigenvectors of dT/dlambda at double points (where T = +-Id and the
// limiting Bloch solutions are the eigendirections of the derivative).
inline RealPointAnalysis analyze_real_point(const PotentialSignal& q, double lambda,
                                            double tol = 1e-11, double double_tol = 1e-6) {
    RealPointAnalysis r;
    r.mono = monodromy(q, lambda, tol, true, true);
    const double dist_p = (r.mono.T - Mat2C::identity()).norm_fro();
    const double dist_m = (r.mono.T + Mat2C::identity()).norm_fro();
    r.is_double = std::min(dist_p, dist_m) < double_tol;
    r.sign = r.is_double ? (dist_p <= dist_m ? +1 : -1) : 0;

    std::pair<cplx, cplx> v1;
    if (r.is_double) {
        const Mat2C& tp = r.mono.T_lambda;
        if (tp.norm_fro() < 1e-9) {
            // dp vanishes on both sheets; every direction is a Bloch limit
            r.degenerate_direction = true;
            v1 = {1.0, 0.0};
        } else {
            auto [mu1, mu2] = eigenvalues2(tp);
            const cplx mu = (mu1.imag() >= mu2.imag()) ? mu1 : mu2;
            v1 = eigenvector2(tp, mu);
        }
    } else {
        if (std::abs(r.mono.w1 - r.mono.w2) < 1e-8)
            throw numerical_error(
                "analyze_real_point: multipliers nearly coincide but T is not +-Id "
                "(unresolved near-double point)");
        v1 = eigenvector2(r.mono.T, r.mono.w1);
    }
    r.dir = v1;

    // Bloch samples psi(x_j) = Phi(x_j) v1; the second sheet's solution is
    // the pointwise conjugate-perpendicular (-conj(psi2), conj(psi1)).
    const std::size_t n = q.n();
    double num = 0.0;     // int (psi1 conj(psi1) - psi2 conj(psi2))
    cplx bint(0.0);       // int psi1 psi2
    for (std::size_t j = 0; j < n; ++j) {
        const Mat2C& fj = r.mono.nodes[j];
        const cplx p1 = fj.m11 * v1.first + fj.m12 * v1.second;
        const cplx p2 = fj.m21 * v1.first + fj.m22 * v1.second;
        num += std::norm(p1) - std::norm(p2);
        bint += p1 * p2;
    }
    const double hweight = two_pi / static_cast<double>(n);
    num *= hweight;
    bint *= hweight;

    // Wronskian-type denominator of the derivative formula; equals |v1|^2 = 1
    r.wronskian = std::norm(v1.first) + std::norm(v1.second);
    r.dp = -num / (4.0 * std::numbers::pi * r.wronskian);
    if (r.is_double) {
        r.a = cplx(0.0, num);        // i * int (|psi1|^2 - |psi2|^2)
        r.b = cplx(0.0, -2.0) * bint; // -2i * int psi1 psi2
    }
    return r;
}

} // namespace detail

// dp/dlambda on the two sheets over a real lambda (regular or double).
// The two values are negatives of each other under the sheet involution.
inline std::pair<double, double> quasimomentum_derivative(const PotentialSignal& q, double lambda,
                                                          double tol = 1e-11) {
    const auto r = detail::analyze_real_point(q, lambda, tol);
    if (!r.is_double && r.wronskian < 1e-12)
        throw numerical_error("quasimomentum_derivative: degenerate Wronskian at a regular point");
    return {r.dp, -r.dp};
}

// Residual |int psi1 psi2| at a verified double point; the theory asserts
// it vanishes for the limiting Bloch solutions.
inline double double_point_integral_check(const PotentialSignal& q, double lambda,
                                          double tol = 1e-11) {
    const auto r = detail::analyze_real_point(q, lambda, tol);
    if (!r.is_double)
        throw validation_error("double_point_integral_check: lambda is not a double point");
    return std::abs(r.b) / 2.0;
}

// The closure criterion at a real spectral point: the reconstructed curve
// frame is periodic iff lambda0 is a double point, and the curve closes
// iff additionally the defects a, b vanish. Numerically a = -4*pi*i*dp.
inline ClosureReport closure_check(const PotentialSignal& q, double lambda0,
                                   double closure_tol = 1e-6, double tol = 1e-11) {
    q.require_nonvanishing("closure_check");
    const auto r = detail::analyze_real_point(q, lambda0, tol);
    ClosureReport rep;
    rep.lambda0 = lambda0;
    rep.is_double_point = r.is_double;
    rep.sign = r.sign;
    rep.degenerate_direction = r.degenerate_direction;
    rep.dp_dlambda = r.dp;
    if (r.is_double) {
        rep.a = r.a;
        rep.b = r.b;
        rep.closure_gap = std::abs(r.a);
        rep.verdict = (std::abs(r.a) < closure_tol && std::abs(r.b) < closure_tol)
                          ? ClosureVerdict::Closed
                          : ClosureVerdict::FramePeriodicNotClosed;
    } else {
        rep.verdict = ClosureVerdict::NotFramePeriodic;
    }
    return rep;
}

struct RealPointClass {
    double lambda = 0.0;
    enum class Kind { Regular, RemovableDouble } kind = Kind::Regular;
    int sign = 0;             // multiplier sign when double
    double dp_dlambda = 0.0;  // value on the first sheet
};

struct DoublePointScan {
    std::vector<RealPointClass> points;
    std::vector<std::string> warnings;
};

// Locate all removable double points in [lambda_min, lambda_max] as
// critical points of the discriminant with |Delta| = 2 and T = +-Id.
// Plain root-finding on Delta -+ 2 is ill-conditioned (even-order zeros),
// so we bisect on sign changes of Delta'.
inline DoublePointScan find_real_double_points(const PotentialSignal& q, double lambda_min,
                                               double lambda_max, std::size_t grid_n = 0,
                                               double tol = 1e-11) {
    q.validate("find_real_double_points");
    if (!q.periodic())
        throw validation_error("find_real_double_points: apply gauge first");
    if (!(lambda_max > lambda_min))
        throw validation_error("find_real_double_points: empty interval");
    if (grid_n == 0)
        grid_n = static_cast<std::size_t>(std::max(64.0, 24.0 * (lambda_max - lambda_min)));

    DoublePointScan result;
    auto dtrace = [&](double lam) {
        const ZSPropagation p = zs_propagate(q.samples, lam, tol, true, 0);
        return std::pair<double, double>(p.T.trace().real(), p.T_lambda.trace().real());
    };

    std::vector<double> lam(grid_n + 1), del(grid_n + 1), dp(grid_n + 1);
    for (std::size_t i = 0; i <= grid_n; ++i) {
        lam[i] = lambda_min + (lambda_max - lambda_min) * static_cast<double>(i) / grid_n;
        auto [d, dd] = dtrace(lam[i]);
        del[i] = d;
        dp[i] = dd;
    }

    for (double end : {lambda_min, lambda_max}) {
        const std::size_t idx = (end == lambda_min) ? 0 : grid_n;
        if (2.0 - std::abs(del[idx]) < 1e-7)
            result.warnings.push_back("interval endpoint at lambda = " + std::to_string(end) +
                                      " sits at a double point; count is ambiguous");
    }

    // Gauss-Newton polish of ||T(lambda) -+ Id||^2 using the variational
    // derivative. Handles the flat case T'(lambda*) = 0 (where both sheet
    // derivatives of p vanish) at the noise floor of the integrator.
    auto refine = [&](double lam_star) {
        for (int it = 0; it < 48; ++it) {
            const ZSPropagation p = zs_propagate(q.samples, lam_star, tol, true, 0);
            const double dist_p = (p.T - Mat2C::identity()).norm_fro();
            const double dist_m = (p.T + Mat2C::identity()).norm_fro();
            const Mat2C e = (dist_p <= dist_m) ? p.T - Mat2C::identity() : p.T + Mat2C::identity();
            const Mat2C& tp = p.T_lambda;
            const double den = tp.norm_fro() * tp.norm_fro();
            if (den < 1e-24) break;
            const double num = (std::conj(tp.m11) * e.m11 + std::conj(tp.m12) * e.m12 +
                                std::conj(tp.m21) * e.m21 + std::conj(tp.m22) * e.m22)
                                   .real();
            const double step = -num / den;
            lam_star += step;
            if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(lam_star))) break;
        }
        return lam_star;
    };

    auto classify_at = [&](double lam_star) {
        lam_star = refine(lam_star);
        const auto r = detail::analyze_real_point(q, lam_star, tol);
        if (!r.is_double) return;
        RealPointClass pc;
        pc.lambda = lam_star;
        pc.kind = RealPointClass::Kind::RemovableDouble;
        pc.sign = r.sign;
        pc.dp_dlambda = r.dp;
        result.points.push_back(pc);
    };

    for (std::size_t i = 0; i < grid_n; ++i) {
        double a = lam[i], b = lam[i + 1];
        double fa = dp[i], fb = dp[i + 1];
        if (fa == 0.0) {
            if (2.0 - std::abs(del[i]) < 1e-6) classify_at(a);
            continue;
        }
        if (fa * fb >= 0.0) continue;
        for (int it = 0; it < 60 && (b - a) > 1e-13 * std::max(1.0, std::abs(a)); ++it) {
            const double m = 0.5 * (a + b);
            const auto [dm, ddm] = dtrace(m);
            (void)dm;
            if (fa * ddm <= 0.0) {
                b = m;
                fb = ddm;
            } else {
                a = m;
                fa = ddm;
            }
        }
        const double lam_star = 0.5 * (a + b);
        const auto [dstar, ddstar] = dtrace(lam_star);
        (void)ddstar;
        if (2.0 - std::abs(dstar) < 1e-6) classify_at(lam_star);
    }
    std::sort(result.points.begin(), result.points.end(),
              [](const RealPointClass& x, const RealPointClass& y) { return x.lambda < y.lambda; });
    return result;
}

} // namespace filament
