#pragma once

// Complex potential samples q(x_j) on the uniform periodic grid, together
// with the Floquet phase phi of q(x + 2pi) = e^{i phi} q(x) and the
// cumulative gauge shift applied so far.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "filament/errors.hpp"
#include "filament/fourier.hpp"

namespace filament {

struct PotentialSignal {
    std::vector<cplx> samples;  // q(x_j), x_j = 2pi j / N
    double phase = 0.0;         // phi in (-pi, pi]
    int winding = 0;            // unreduced phase = phase + 2pi*winding
    double gauge_shift = 0.0;   // cumulative alpha applied via gauge transforms

    std::size_t n() const { return samples.size(); }

    bool periodic(double tol = 1e-9) const { return std::abs(phase) < tol; }

    void validate(const char* who) const {
        if (samples.size() < 16) throw validation_error(std::string(who) + ": need at least 16 samples");
        for (const auto& q : samples) {
            if (!finite(q)) throw validation_error(std::string(who) + ": non-finite sample");
        }
        if (!finite(phase)) throw validation_error(std::string(who) + ": non-finite phase");
    }

    double min_abs() const {
        double m = std::abs(samples[0]);
        for (const auto& q : samples) m = std::min(m, std::abs(q));
        return m;
    }

    void require_nonvanishing(const char* who, double floor = 1e-10) const {
        if (min_abs() <= floor)
            throw validation_error(std::string(who) + ": potential vanishes at a node");
    }
};

// Reduce an angle to (-pi, pi]; returns the reduced angle and the winding.
inline std::pair<double, int> reduce_angle(double phi) {
    const double pi = std::numbers::pi;
    double r = std::remainder(phi, two_pi); // (-pi, pi], with -pi possible
    int w = static_cast<int>(std::lround((phi - r) / two_pi));
    if (r <= -pi) {
        r += two_pi;
        --w;
    }
    return {r, w};
}

// q -> e^{i alpha x} q, shifting the spectral parameter by -alpha.
inline PotentialSignal gauge_shift(const PotentialSignal& q, double alpha) {
    q.validate("gauge_shift");
    if (!finite(alpha)) throw validation_error("gauge_shift: non-finite alpha");
    PotentialSignal out;
    out.samples.resize(q.n());
    for (std::size_t j = 0; j < q.n(); ++j) {
        const double x = two_pi * static_cast<double>(j) / static_cast<double>(q.n());
        out.samples[j] = q.samples[j] * cplx(std::cos(alpha * x), std::sin(alpha * x));
    }
    const double raw = q.phase + two_pi * static_cast<double>(q.winding) + two_pi * alpha;
    auto [red, w] = reduce_angle(raw);
    out.phase = red;
    out.winding = w;
    out.gauge_shift = q.gauge_shift + alpha;
    return out;
}

} // namespace filament
