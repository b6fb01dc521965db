#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "muhat/fft.hpp"
#include "muhat/graphs.hpp"
#include "muhat/rng.hpp"

namespace muhat {

enum class GenKind { constant, polynomial, weierstrass, fbm };

struct GeneratorSpec {
    GenKind kind = GenKind::constant;
    std::size_t n = 1024;          // grid points; the grid is i/(n-1), i = 0..n-1
    std::uint64_t seed = 0;        // stochastic kinds only
    double constant_c = 0.0;
    std::vector<double> poly_coeffs;   // low order first
    double weier_a = 0.5;          // amplitude ratio in (0,1)
    double weier_b = 3.0;          // frequency ratio > 1, with a*b >= 1
    std::size_t weier_terms = 30;
    double hurst = 0.5;            // fbm Hurst index in (0,1)
    bool normalize = false;        // fbm only: affinely rescale values to [0,1]

    static GeneratorSpec constant_fn(double c, std::size_t n) {
        GeneratorSpec s;
        s.kind = GenKind::constant;
        s.constant_c = c;
        s.n = n;
        return s;
    }
    static GeneratorSpec polynomial_fn(std::vector<double> coeffs, std::size_t n) {
        GeneratorSpec s;
        s.kind = GenKind::polynomial;
        s.poly_coeffs = std::move(coeffs);
        s.n = n;
        return s;
    }
    static GeneratorSpec weierstrass_fn(double a, double b, std::size_t terms, std::size_t n) {
        GeneratorSpec s;
        s.kind = GenKind::weierstrass;
        s.weier_a = a;
        s.weier_b = b;
        s.weier_terms = terms;
        s.n = n;
        return s;
    }
    static GeneratorSpec fbm_fn(double hurst, std::size_t n, std::uint64_t seed,
                                bool normalize = false) {
        GeneratorSpec s;
        s.kind = GenKind::fbm;
        s.hurst = hurst;
        s.n = n;
        s.seed = seed;
        s.normalize = normalize;
        return s;
    }
};

struct GenResult {
    SampledFunction fn;
    bool covariance_fallback = false;  // fbm only: Cholesky path was used
};

namespace detail {

inline std::vector<double> uniform_grid(std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return xs;
}

// Fractional Gaussian noise autocovariance at lag k for increments of
// spacing h: 0.5 h^{2H} (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}).
inline double fgn_cov(std::size_t k, double H, double h2H) {
    const double kk = static_cast<double>(k);
    return 0.5 * h2H *
           (std::pow(kk + 1.0, 2.0 * H) - 2.0 * std::pow(kk, 2.0 * H) +
            std::pow(std::abs(kk - 1.0), 2.0 * H));
}

// Davies-Harte / circulant-embedding synthesis of m fGn increments. The
// circulant is padded to the next power of two worth of increments so the
// transform stays radix-2; the first m samples are returned.
inline bool fgn_circulant(std::size_t m, double H, double h, Rng& rng, std::vector<double>& out) {
    const std::size_t mp = next_pow2(m);
    const std::size_t L = 2 * mp;
    const double h2H = std::pow(h, 2.0 * H);

    std::vector<cplx> row(L);
    for (std::size_t j = 0; j <= mp; ++j) row[j] = fgn_cov(j, H, h2H);
    for (std::size_t j = 1; j < mp; ++j) row[L - j] = row[j];
    fft_inplace(std::span<cplx>(row), false);

    double lam_max = 0.0, lam_min = 0.0;
    for (const cplx& v : row) {
        lam_max = std::max(lam_max, v.real());
        lam_min = std::min(lam_min, v.real());
    }
    if (lam_min < -1e-9 * lam_max) return false;  // embedding not nonnegative definite

    std::vector<cplx> v(L);
    const double inv_sqrt_L = 1.0 / std::sqrt(static_cast<double>(L));
    v[0] = std::sqrt(std::max(0.0, row[0].real())) * rng.normal();
    v[mp] = std::sqrt(std::max(0.0, row[mp].real())) * rng.normal();
    for (std::size_t k = 1; k < mp; ++k) {
        const double s = std::sqrt(std::max(0.0, row[k].real()) * 0.5);
        const double a = rng.normal(), b = rng.normal();
        v[k] = {s * a, s * b};
        v[L - k] = std::conj(v[k]);
    }
    fft_inplace(std::span<cplx>(v), false);
    out.resize(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = v[j].real() * inv_sqrt_L;
    return true;
}

// Direct covariance factorization of B at the grid points (excluding 0).
inline void fbm_cholesky(const std::vector<double>& xs, double H, Rng& rng,
                         std::vector<double>& path) {
    const std::size_t m = xs.size() - 1;
    std::vector<double> K(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double s = xs[i + 1], t = xs[j + 1];
            K[i * m + j] = 0.5 * (std::pow(s, 2.0 * H) + std::pow(t, 2.0 * H) -
                                  std::pow(std::abs(s - t), 2.0 * H));
        }
    for (std::size_t j = 0; j < m; ++j) {
        double d = K[j * m + j];
        for (std::size_t k = 0; k < j; ++k) d -= K[j * m + k] * K[j * m + k];
        if (d <= 0.0) throw std::runtime_error("fbm: covariance factorization failed");
        const double Ljj = std::sqrt(d);
        K[j * m + j] = Ljj;
        for (std::size_t i = j + 1; i < m; ++i) {
            double s = K[i * m + j];
            for (std::size_t k = 0; k < j; ++k) s -= K[i * m + k] * K[j * m + k];
            K[i * m + j] = s / Ljj;
        }
    }
    std::vector<double> z(m);
    for (double& zz : z) zz = rng.normal();
    path.assign(xs.size(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += K[i * m + k] * z[k];
        path[i + 1] = s;
    }
}

}  // namespace detail

inline GenResult gen(const GeneratorSpec& spec) {
    if (spec.n < 2) throw std::domain_error("gen: need at least 2 grid points");
    GenResult res;
    std::vector<double> xs = detail::uniform_grid(spec.n);
    std::vector<double> vals(spec.n);

    switch (spec.kind) {
        case GenKind::constant: {
            detail::require_finite(spec.constant_c, "constant level");
            std::fill(vals.begin(), vals.end(), spec.constant_c);
            break;
        }
        case GenKind::polynomial: {
            if (spec.poly_coeffs.empty())
                throw std::domain_error("gen: polynomial needs at least one coefficient");
            for (double c : spec.poly_coeffs) detail::require_finite(c, "coefficient");
            for (std::size_t i = 0; i < spec.n; ++i) {
                double acc = 0.0;
                for (std::size_t k = spec.poly_coeffs.size(); k-- > 0;)
                    acc = acc * xs[i] + spec.poly_coeffs[k];
                vals[i] = acc;
            }
            break;
        }
        case GenKind::weierstrass: {
            if (!(spec.weier_a > 0.0 && spec.weier_a < 1.0))
                throw std::domain_error("gen: weierstrass amplitude ratio must be in (0,1)");
            if (!(spec.weier_b > 1.0))
                throw std::domain_error("gen: weierstrass frequency ratio must be > 1");
            if (spec.weier_a * spec.weier_b < 1.0)
                throw std::domain_error("gen: weierstrass needs a*b >= 1 for a rough graph");
            if (spec.weier_terms < 1) throw std::domain_error("gen: weierstrass needs >= 1 term");
            const double twopi = 2.0 * std::numbers::pi;
            for (std::size_t i = 0; i < spec.n; ++i) {
                double acc = 0.0, amp = 1.0, freq = 1.0;
                for (std::size_t k = 0; k < spec.weier_terms; ++k) {
                    acc += amp * std::cos(twopi * freq * xs[i]);
                    amp *= spec.weier_a;
                    freq *= spec.weier_b;
                }
                vals[i] = acc;
            }
            break;
        }
        case GenKind::fbm: {
            if (!(spec.hurst > 0.0 && spec.hurst < 1.0))
                throw std::domain_error("gen: Hurst index must be in (0,1)");
            if (!is_pow2(spec.n)) throw std::domain_error("gen: fbm needs a power-of-two n");
            Rng rng(spec.seed);
            const std::size_t m = spec.n - 1;
            const double h = 1.0 / static_cast<double>(m);
            std::vector<double> incr;
            if (detail::fgn_circulant(m, spec.hurst, h, rng, incr)) {
                vals[0] = 0.0;
                for (std::size_t i = 0; i < m; ++i) vals[i + 1] = vals[i] + incr[i];
            } else if (spec.n <= 1024) {
                res.covariance_fallback = true;
                std::vector<double> path;
                detail::fbm_cholesky(xs, spec.hurst, rng, path);
                vals = std::move(path);
            } else {
                throw std::runtime_error(
                    "gen: fbm circulant embedding is not nonnegative definite and n is too "
                    "large for the covariance fallback");
            }
            if (spec.normalize) {
                const auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
                const double lo = *lo_it, span = *hi_it - *lo_it;
                if (span > 0.0) {
                    for (double& v : vals) v = (v - lo) / span;
                } else {
                    std::fill(vals.begin(), vals.end(), 0.5);
                }
            }
            break;
        }
    }
    res.fn = SampledFunction(std::move(xs), std::move(vals));
    return res;
}

}  // namespace muhat
