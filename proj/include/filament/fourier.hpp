#pragma once

// Periodic-grid spectral toolbox on [0, 2pi): FFT (radix-2 with a plain
// DFT fallback for non power-of-two sizes), spectral differentiation,
// periodic antiderivatives, grid refinement, and trigonometric
// interpolation at arbitrary points.

#include <complex>
#include <numbers>
#include <vector>

#include "filament/errors.hpp"
#include "filament/su2.hpp"

namespace filament {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

inline void fft_radix2(std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 1.0 : -1.0) * two_pi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::vector<cplx> dft_naive(const std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n, cplx(0.0));
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc(0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * two_pi * static_cast<double>(k * j % n) / static_cast<double>(n);
            acc += a[j] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

} // namespace detail

// Forward DFT: c_k = sum_j f_j e^{-i k x_j}; no normalization.
inline std::vector<cplx> fft(std::vector<cplx> a) {
    if (is_pow2(a.size())) {
        detail::fft_radix2(a, false);
        return a;
    }
    return detail::dft_naive(a, false);
}

// Inverse DFT including the 1/n factor.
inline std::vector<cplx> ifft(std::vector<cplx> a) {
    const std::size_t n = a.size();
    if (is_pow2(n)) {
        detail::fft_radix2(a, true);
    } else {
        a = detail::dft_naive(a, true);
    }
    for (auto& v : a) v /= static_cast<double>(n);
    return a;
}

// Signed frequency of bin k on an n-grid.
inline long signed_freq(std::size_t k, std::size_t n) {
    return (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

// m-th spectral derivative of 2pi-periodic samples. The Nyquist mode is
// zeroed for odd m (it carries no usable derivative information).
inline std::vector<cplx> spectral_derivative(const std::vector<cplx>& f, int order = 1) {
    const std::size_t n = f.size();
    std::vector<cplx> c = fft(f);
    for (std::size_t k = 0; k < n; ++k) {
        long kk = signed_freq(k, n);
        if (n % 2 == 0 && k == n / 2 && order % 2 == 1) {
            c[k] = 0.0;
            continue;
        }
        cplx mult(1.0);
        for (int m = 0; m < order; ++m) mult *= cplx(0.0, static_cast<double>(kk));
        c[k] *= mult;
    }
    return ifft(c);
}

inline std::vector<double> spectral_derivative_real(const std::vector<double>& f, int order = 1) {
    std::vector<cplx> fc(f.begin(), f.end());
    const std::vector<cplx> d = spectral_derivative(fc, order);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = d[i].real();
    return out;
}

// Antiderivative of the zero-mean part, sampled on the grid with F(0) = 0.
// The full antiderivative of f is then mean(f)*x + F(x).
inline std::vector<cplx> periodic_antiderivative(const std::vector<cplx>& f) {
    const std::size_t n = f.size();
    std::vector<cplx> c = fft(f);
    c[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        if (n % 2 == 0 && k == n / 2) {
            c[k] = 0.0;
            continue;
        }
        c[k] /= cplx(0.0, static_cast<double>(signed_freq(k, n)));
    }
    std::vector<cplx> g = ifft(c);
    const cplx g0 = g[0];
    for (auto& v : g) v -= g0;
    return g;
}

inline cplx mean(const std::vector<cplx>& f) {
    cplx acc(0.0);
    for (const auto& v : f) acc += v;
    return acc / static_cast<double>(f.size());
}

inline double mean(const std::vector<double>& f) {
    double acc = 0.0;
    for (double v : f) acc += v;
    return acc / static_cast<double>(f.size());
}

// Fourier coefficients with split Nyquist, for interpolation off the grid.
struct TrigInterpolant {
    std::vector<cplx> coeff; // index i corresponds to frequency i - kmax
    long kmax = 0;

    explicit TrigInterpolant(const std::vector<cplx>& samples) {
        const std::size_t n = samples.size();
        std::vector<cplx> c = fft(samples);
        for (auto& v : c) v /= static_cast<double>(n);
        kmax = static_cast<long>(n / 2);
        coeff.assign(2 * kmax + 1, cplx(0.0));
        for (std::size_t k = 0; k < n; ++k) {
            const long kk = signed_freq(k, n);
            if (n % 2 == 0 && k == n / 2) {
                coeff[0] += 0.5 * c[k];           // frequency -kmax
                coeff[2 * kmax] += 0.5 * c[k];    // frequency +kmax
            } else {
                coeff[kk + kmax] += c[k];
            }
        }
    }

    cplx operator()(double x) const {
        // Horner-style accumulation over e^{ix}
        const cplx e(std::cos(x), std::sin(x));
        cplx acc(0.0);
        for (long i = static_cast<long>(coeff.size()) - 1; i >= 0; --i) acc = acc * e + coeff[i];
        const double phase = -static_cast<double>(kmax) * x;
        return acc * cplx(std::cos(phase), std::sin(phase));
    }
};

// Resample 2pi-periodic data onto an m-point uniform grid (zero padding
// in frequency space when both sizes are powers of two).
inline std::vector<cplx> spectral_refine(const std::vector<cplx>& f, std::size_t m) {
    const std::size_t n = f.size();
    if (m == n) return f;
    if (m % n == 0 && is_pow2(n) && is_pow2(m)) {
        std::vector<cplx> c = fft(f);
        std::vector<cplx> cm(m, cplx(0.0));
        const double scale = static_cast<double>(m) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const long kk = signed_freq(k, n);
            if (n % 2 == 0 && k == n / 2) {
                cm[n / 2] += 0.5 * c[k] * scale;
                cm[m - n / 2] += 0.5 * c[k] * scale;
            } else {
                cm[(kk + static_cast<long>(m)) % static_cast<long>(m)] = c[k] * scale;
            }
        }
        return ifft(cm);
    }
    TrigInterpolant interp(f);
    std::vector<cplx> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = interp(two_pi * static_cast<double>(j) / static_cast<double>(m));
    return out;
}

} // namespace filament
