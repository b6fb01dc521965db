#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "muhat/parallel.hpp"

namespace muhat {

using cplx = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Twiddle factors e^{-2pi i k/n} for k < n/2, computed fresh from std::polar
// so there is no accumulated rotation drift.
inline std::vector<cplx> fft_twiddles(std::size_t n) {
    std::vector<cplx> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        w[k] = {std::cos(ang), std::sin(ang)};
    }
    return w;
}

// In-place radix-2 DIT transform, forward sign e^{-2pi i jk/n}, unscaled.
// `twiddles` must come from fft_twiddles(m) with m >= n; entries are strided.
inline void fft_inplace(std::span<cplx> a, bool inverse, const std::vector<cplx>& twiddles,
                        std::size_t twiddle_n) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = twiddle_n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx w = twiddles[k * stride];
                if (inverse) w = std::conj(w);
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

inline void fft_inplace(std::span<cplx> a, bool inverse = false) {
    const auto tw = fft_twiddles(a.size());
    fft_inplace(a, inverse, tw, a.size());
}

// 2D transform of a row-major rows x cols array. Column passes work on
// gathered tiles so memory access stays cache-friendly at 4096^2.
inline void fft_2d_inplace(std::vector<cplx>& a, std::size_t rows, std::size_t cols,
                           bool inverse = false, unsigned threads = 0) {
    if (a.size() != rows * cols) throw std::invalid_argument("fft_2d: size mismatch");
    if (!is_pow2(rows) || !is_pow2(cols)) throw std::invalid_argument("fft_2d: sizes must be powers of two");
    const auto tw = fft_twiddles(std::max(rows, cols));
    const std::size_t twn = std::max(rows, cols);

    if (cols > 1) {
        parallel_chunks(rows, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t r = lo; r < hi; ++r)
                fft_inplace(std::span<cplx>(a.data() + r * cols, cols), inverse, tw, twn);
        }, threads);
    }
    if (rows > 1) {
        constexpr std::size_t kTile = 32;
        const std::size_t ntiles = (cols + kTile - 1) / kTile;
        parallel_chunks(ntiles, [&](std::size_t tlo, std::size_t thi) {
            std::vector<cplx> scratch(kTile * rows);
            for (std::size_t t = tlo; t < thi; ++t) {
                const std::size_t c0 = t * kTile;
                const std::size_t w = std::min(kTile, cols - c0);
                for (std::size_t rb = 0; rb < rows; rb += kTile) {
                    const std::size_t rh = std::min(kTile, rows - rb);
                    for (std::size_t r = 0; r < rh; ++r)
                        for (std::size_t c = 0; c < w; ++c)
                            scratch[c * rows + rb + r] = a[(rb + r) * cols + c0 + c];
                }
                for (std::size_t c = 0; c < w; ++c)
                    fft_inplace(std::span<cplx>(scratch.data() + c * rows, rows), inverse, tw, twn);
                for (std::size_t rb = 0; rb < rows; rb += kTile) {
                    const std::size_t rh = std::min(kTile, rows - rb);
                    for (std::size_t r = 0; r < rh; ++r)
                        for (std::size_t c = 0; c < w; ++c)
                            a[(rb + r) * cols + c0 + c] = scratch[c * rows + rb + r];
                }
            }
        }, threads);
    }
}

}  // namespace muhat
