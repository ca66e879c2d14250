#pragma once

// Finite-difference machinery for non-periodic sampled data: Fornberg
// weights on sliding stencils, nodewise derivatives, and cumulative
// integration of the local polynomial interpolant.

#include <array>
#include <cstddef>
#include <vector>

#include "filament/errors.hpp"
#include "filament/fourier.hpp"

namespace filament {

// Fornberg's algorithm: weights w_i with f^(m)(x0) ~ sum_i w_i f(x_i).
inline std::vector<double> fornberg_weights(double x0, const std::vector<double>& x, int m) {
    const int n = static_cast<int>(x.size());
    std::vector<double> c(static_cast<std::size_t>(n) * (m + 1), 0.0);
    auto C = [&](int i, int j) -> double& { return c[static_cast<std::size_t>(i) * (m + 1) + j]; };
    double c1 = 1.0;
    double c4 = x[0] - x0;
    C(0, 0) = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    C(i, k) = c1 * (k * C(i - 1, k - 1) - c5 * C(i - 1, k)) / c2;
                C(i, 0) = -c1 * c5 * C(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                C(j, k) = (c4 * C(j, k) - k * C(j, k - 1)) / c3;
            C(j, 0) = c4 * C(j, 0) / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = C(i, m);
    return w;
}

// Nodewise m-th derivative of samples on the uniform grid x_j = 2pi j / n,
// using width-point stencils (one-sided near the ends).
template <typename T>
std::vector<T> stencil_derivative(const std::vector<T>& f, int order, int width = 9) {
    const int n = static_cast<int>(f.size());
    if (n < width) throw validation_error("stencil_derivative: too few samples");
    const double h = two_pi / static_cast<double>(n);
    std::vector<T> out(f.size());
    for (int i = 0; i < n; ++i) {
        int lo = i - width / 2;
        if (lo < 0) lo = 0;
        if (lo + width > n) lo = n - width;
        std::vector<double> nodes(width);
        for (int k = 0; k < width; ++k) nodes[k] = (lo + k) * h;
        const std::vector<double> w = fornberg_weights(i * h, nodes, order);
        T acc{};
        for (int k = 0; k < width; ++k) acc = acc + w[k] * f[lo + k];
        out[i] = acc;
    }
    return out;
}

// Cumulative integral F(x_j) = int_0^{x_j} f of the local interpolant,
// plus the full-interval value int_0^{2pi} f (the final sample at 2pi is
// extrapolated from the last stencil window).
template <typename T>
std::pair<std::vector<T>, T> stencil_cumulative(const std::vector<T>& f, int width = 8) {
    const int n = static_cast<int>(f.size());
    if (n < width) throw validation_error("stencil_cumulative: too few samples");
    const double h = two_pi / static_cast<double>(n);
    // 4-point Gauss-Legendre on [0,1]
    static const std::array<double, 4> gx = {0.069431844202973712, 0.33000947820757187,
                                             0.66999052179242813, 0.93056815579702629};
    static const std::array<double, 4> gw = {0.17392742256872692, 0.32607257743127307,
                                             0.32607257743127307, 0.17392742256872692};
    std::vector<T> F(f.size());
    F[0] = T{};
    T acc{};
    for (int j = 0; j < n; ++j) { // interval [x_j, x_j + h]; the last one ends at 2pi
        int lo = j - width / 2 + 1;
        if (lo < 0) lo = 0;
        if (lo + width > n) lo = n - width;
        std::vector<double> nodes(width);
        for (int k = 0; k < width; ++k) nodes[k] = (lo + k) * h;
        T seg{};
        for (int g = 0; g < 4; ++g) {
            const double xg = (j + gx[g]) * h;
            const std::vector<double> w = fornberg_weights(xg, nodes, 0);
            T val{};
            for (int k = 0; k < width; ++k) val = val + w[k] * f[lo + k];
            seg = seg + (gw[g] * h) * val;
        }
        acc = acc + seg;
        if (j + 1 < n) F[j + 1] = acc;
    }
    return {F, acc};
}

} // namespace filament
