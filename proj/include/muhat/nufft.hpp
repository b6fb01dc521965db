#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "muhat/fft.hpp"
#include "muhat/measures.hpp"
#include "muhat/quadrature.hpp"
#include "muhat/sum.hpp"

namespace muhat {

// "Exponential of semicircle" spreading kernel, support |z| <= p/2.
namespace eskernel {

inline double value(double z, double p, double beta) {
    const double r = 2.0 * z / p;
    const double q = 1.0 - r * r;
    if (q <= 0.0) return 0.0;
    return std::exp(beta * (std::sqrt(q) - 1.0));
}

// hat(nu) = int phi(t) e^{-2pi i nu t} dt; real and even in nu. The
// substitution t = (p/2) sin(theta) removes the square-root endpoint
// behaviour, so Gauss-Legendre converges to machine precision.
inline double hat(double nu, double p, double beta) {
    return p * gl64().integrate(
        [&](double th) {
            const double c = std::cos(th);
            return std::exp(beta * (c - 1.0)) * c *
                   std::cos(std::numbers::pi * nu * p * std::sin(th));
        },
        0.0, 0.5 * std::numbers::pi);
}

}  // namespace eskernel

// Uniform-knot 4-point Lagrange table for the kernel; absolute error is
// well below the kernel's own aliasing error.
class KernelTable {
public:
    KernelTable() = default;
    KernelTable(double p, double beta, std::size_t knots = 8192)
        : half_(0.5 * p), inv_h_((static_cast<double>(knots) - 4.0) / (0.5 * p)) {
        vals_.resize(knots);
        for (std::size_t i = 0; i < knots; ++i)
            vals_[i] = eskernel::value(static_cast<double>(i) / inv_h_, p, beta);
    }

    double operator()(double z) const {
        z = std::abs(z);
        if (z >= half_) return 0.0;
        const double u = z * inv_h_;
        std::size_t i = static_cast<std::size_t>(u);
        if (i < 1) i = 1;
        if (i > vals_.size() - 3) i = vals_.size() - 3;
        const double s = u - static_cast<double>(i);
        const double vm = vals_[i - 1], v0 = vals_[i], v1 = vals_[i + 1], v2 = vals_[i + 2];
        return v0 + s * (v1 - vm / 3.0 - v0 / 2.0 - v2 / 6.0 +
                         s * (vm / 2.0 - v0 + v1 / 2.0 +
                              s * (-vm / 6.0 + v0 / 2.0 - v1 / 2.0 + v2 / 6.0)));
    }

private:
    double half_ = 0.0, inv_h_ = 1.0;
    std::vector<double> vals_;
};

// Evaluates muhat(xi) at arbitrary frequencies. Small jobs use the exact
// pairwise-summed sum. Large jobs (annulus scans) go through an oversampled
// frequency lattice: spread atoms onto a spatial grid with the ES kernel,
// FFT, deconvolve, then interpolate lattice values at the requested points
// with the same kernel. Oversampling is needed on both sides (the spreading
// grid relative to the used modes and the lattice spacing relative to the
// support width), so the per-axis grid size is ~2 sigma^2 * width * xi_max;
// sigma steps down a ladder when that would blow the memory budget, with the
// tap count rising to hold absolute error near 1e-11. Every path is
// deterministic and independent of threading.
class SpectrumEvaluator {
public:
    SpectrumEvaluator(const AtomicMeasure2D& mu, double xi_max, std::size_t expected_evals,
                      unsigned threads = 0)
        : mu_(&mu), total_(mu.total_weight()), xi_max_(xi_max) {
        double x0, x1, y0, y1;
        mu.bounds(x0, x1, y0, y1);
        cx_ = 0.5 * (x0 + x1);
        cy_ = 0.5 * (y0 + y1);
        wx_ = x1 - x0;
        wy_ = y1 - y0;
        if (expected_evals * mu.size() >= kDirectCostThreshold) try_build_lattice(threads);
    }

    bool lattice_active() const { return lattice_active_; }

    std::complex<double> eval(FrequencyPoint f) const {
        if (!covered(f)) return direct(f);
        std::complex<double> v = interp(f);
        const double phase = -2.0 * std::numbers::pi * (cx_ * f.xi1 + cy_ * f.xi2);
        return v * std::complex<double>(std::cos(phase), std::sin(phase));
    }

    double modulus(FrequencyPoint f) const {
        if (!covered(f)) return std::abs(direct(f));
        return std::abs(interp(f));
    }

private:
    static constexpr std::size_t kDirectCostThreshold = 1u << 25;
    static constexpr std::size_t kMaxAxisSize = 4096;
    static constexpr std::size_t kMaxDegenerateAxisSize = 1u << 16;
    static constexpr std::size_t kMaxLatticeCells = std::size_t{1} << 24;

    struct Axis {
        bool degenerate = true;  // zero support width: no lattice dimension
        double delta = 1.0;      // lattice spacing
        std::size_t n = 1;
        double cover = 0.0;      // |xi| reach of safe interpolation
        double sigma = 2.0;
        double beta = 0.0;
        KernelTable table;
    };

    // ladder of (oversampling, taps) pairs, error ~1e-11 each
    static int taps_for(double sigma) {
        return static_cast<int>(std::ceil(25.33 / (std::numbers::pi * std::sqrt(1.0 - 1.0 / sigma)))) + 1;
    }

    bool covered(FrequencyPoint f) const {
        return lattice_active_ && std::abs(f.xi1) <= ax_.cover && std::abs(f.xi2) <= ay_.cover;
    }

    std::complex<double> direct(FrequencyPoint f) const {
        const double twopi = 2.0 * std::numbers::pi;
        const std::complex<double> s =
            pairwise_sum_n<std::complex<double>>(0, mu_->size(), [&](std::size_t j) {
                const double phase = -twopi * (mu_->x[j] * f.xi1 + mu_->y[j] * f.xi2);
                return std::complex<double>(mu_->w[j] * std::cos(phase), mu_->w[j] * std::sin(phase));
            });
        return s / total_;
    }

    // Picks the largest oversampling whose grid fits max_n. The used modes
    // stay inside |nu| <= 1/(2 sigma) of the grid Nyquist on the spreading
    // side, and atoms stay inside 1/(2 sigma) of the lattice Nyquist on the
    // interpolation side.
    static bool plan_axis(Axis& a, double width, double xi_max, int p, std::size_t max_n) {
        if (width <= 0.0) {
            a.degenerate = true;
            a.n = 1;
            a.cover = xi_max;
            return true;
        }
        a.degenerate = false;
        const double u = std::max(width, 1e-9);
        for (double sigma : {2.0, 1.5, 1.25}) {
            const int taps = std::max(p, taps_for(sigma));
            const double delta = 1.0 / (sigma * u);
            const double modes_half = xi_max / delta + 0.5 * taps + 2.0;
            const std::size_t n = next_pow2(static_cast<std::size_t>(
                std::ceil(2.0 * sigma * modes_half)));
            if (n > max_n) continue;
            a.sigma = sigma;
            a.delta = delta;
            a.n = n;
            a.cover = (static_cast<double>(n) / (2.0 * sigma) - 0.5 * taps - 2.0) * delta;
            if (a.cover >= xi_max) return true;
        }
        return false;
    }

    void try_build_lattice(unsigned threads) {
        const std::size_t max_nx = (wy_ <= 0.0) ? kMaxDegenerateAxisSize : kMaxAxisSize;
        const std::size_t max_ny = (wx_ <= 0.0) ? kMaxDegenerateAxisSize : kMaxAxisSize;
        // Each axis picks its own oversampling rung, but the tap count is
        // shared; iterate to the (monotone, tiny) fixpoint.
        int p = 0;
        for (int iter = 0; iter < 4; ++iter) {
            if (!plan_axis(ax_, wx_, xi_max_, p, max_nx) ||
                !plan_axis(ay_, wy_, xi_max_, p, max_ny))
                return;
            int need = 2;
            if (!ax_.degenerate) need = std::max(need, taps_for(ax_.sigma));
            if (!ay_.degenerate) need = std::max(need, taps_for(ay_.sigma));
            if (need <= p) break;
            p = need;
        }
        p_ = p;
        if (ax_.n * ay_.n > kMaxLatticeCells) return;
        for (Axis* a : {&ax_, &ay_}) {
            if (a->degenerate) continue;
            a->beta = 0.976 * std::numbers::pi * static_cast<double>(p_) * (1.0 - 0.5 / a->sigma);
            a->table = KernelTable(p_, a->beta);
        }

        const std::size_t nx = ax_.n, ny = ay_.n;
        std::vector<cplx> grid(nx * ny, cplx{0.0, 0.0});

        // spread atoms (spatial side), pre-deconvolving the interp kernel
        const double dtx = ax_.degenerate ? 0.0 : 1.0 / (static_cast<double>(nx) * ax_.delta);
        const double dty = ay_.degenerate ? 0.0 : 1.0 / (static_cast<double>(ny) * ay_.delta);
        std::vector<double> tapx(static_cast<std::size_t>(p_), 1.0);
        std::vector<double> tapy(static_cast<std::size_t>(p_), 1.0);
        for (std::size_t j = 0; j < mu_->size(); ++j) {
            double c = mu_->w[j] / total_;
            std::ptrdiff_t ix0 = 0, iy0 = 0;
            int px = 1, py = 1;
            if (!ax_.degenerate) {
                const double u = mu_->x[j] - cx_;
                c /= eskernel::hat(u * ax_.delta, p_, ax_.beta);
                const double gx = u / dtx + 0.5 * static_cast<double>(nx);
                ix0 = static_cast<std::ptrdiff_t>(std::floor(gx)) - p_ / 2 + 1;
                px = p_;
                for (int a = 0; a < p_; ++a)
                    tapx[static_cast<std::size_t>(a)] =
                        eskernel::value(gx - static_cast<double>(ix0 + a), p_, ax_.beta);
            }
            if (!ay_.degenerate) {
                const double v = mu_->y[j] - cy_;
                c /= eskernel::hat(v * ay_.delta, p_, ay_.beta);
                const double gy = v / dty + 0.5 * static_cast<double>(ny);
                iy0 = static_cast<std::ptrdiff_t>(std::floor(gy)) - p_ / 2 + 1;
                py = p_;
                for (int b = 0; b < p_; ++b)
                    tapy[static_cast<std::size_t>(b)] =
                        eskernel::value(gy - static_cast<double>(iy0 + b), p_, ay_.beta);
            }
            for (int b = 0; b < py; ++b) {
                const std::size_t row = ay_.degenerate
                    ? 0
                    : static_cast<std::size_t>((iy0 + b + 2 * static_cast<std::ptrdiff_t>(ny)) %
                                               static_cast<std::ptrdiff_t>(ny));
                const double cb = c * tapy[static_cast<std::size_t>(b)];
                for (int a = 0; a < px; ++a) {
                    const std::size_t col = ax_.degenerate
                        ? 0
                        : static_cast<std::size_t>((ix0 + a + 2 * static_cast<std::ptrdiff_t>(nx)) %
                                                   static_cast<std::ptrdiff_t>(nx));
                    grid[row * nx + col] += cb * tapx[static_cast<std::size_t>(a)];
                }
            }
        }

        fft_2d_inplace(grid, ny, nx, false, threads);

        // fftshift both axes, then deconvolve the spreading kernel per mode
        auto shift_index = [](std::size_t k, std::size_t n) { return (k + n / 2) % n; };
        std::vector<cplx> lat(nx * ny);
        std::vector<double> fx(nx, 1.0), fy(ny, 1.0);
        if (!ax_.degenerate)
            for (std::size_t k = 0; k < nx; ++k) {
                const long long m = static_cast<long long>(k) - static_cast<long long>(nx / 2);
                const double parity = (m % 2 == 0) ? 1.0 : -1.0;
                fx[k] = parity / eskernel::hat(static_cast<double>(m) / static_cast<double>(nx),
                                               p_, ax_.beta);
            }
        if (!ay_.degenerate)
            for (std::size_t k = 0; k < ny; ++k) {
                const long long m = static_cast<long long>(k) - static_cast<long long>(ny / 2);
                const double parity = (m % 2 == 0) ? 1.0 : -1.0;
                fy[k] = parity / eskernel::hat(static_cast<double>(m) / static_cast<double>(ny),
                                               p_, ay_.beta);
            }
        for (std::size_t ky = 0; ky < ny; ++ky) {
            const std::size_t sy = ay_.degenerate ? 0 : shift_index(ky, ny);
            for (std::size_t kx = 0; kx < nx; ++kx) {
                const std::size_t sx = ax_.degenerate ? 0 : shift_index(kx, nx);
                lat[ky * nx + kx] = grid[sy * nx + sx] * (fx[kx] * fy[ky]);
            }
        }
        lattice_ = std::move(lat);
        lattice_active_ = true;
    }

    std::complex<double> interp(FrequencyPoint f) const {
        const std::size_t nx = ax_.n, ny = ay_.n;
        double wxs[32], wys[32];
        std::ptrdiff_t ix0 = 0, iy0 = 0;
        int px = 1, py = 1;
        if (!ax_.degenerate) {
            const double g = f.xi1 / ax_.delta + 0.5 * static_cast<double>(nx);
            ix0 = static_cast<std::ptrdiff_t>(std::floor(g)) - p_ / 2 + 1;
            px = p_;
            for (int a = 0; a < px; ++a) wxs[a] = ax_.table(g - static_cast<double>(ix0 + a));
        } else {
            wxs[0] = 1.0;
        }
        if (!ay_.degenerate) {
            const double g = f.xi2 / ay_.delta + 0.5 * static_cast<double>(ny);
            iy0 = static_cast<std::ptrdiff_t>(std::floor(g)) - p_ / 2 + 1;
            py = p_;
            for (int b = 0; b < py; ++b) wys[b] = ay_.table(g - static_cast<double>(iy0 + b));
        } else {
            wys[0] = 1.0;
        }
        if (ix0 < 0 || iy0 < 0 || ix0 + px > static_cast<std::ptrdiff_t>(nx) ||
            iy0 + py > static_cast<std::ptrdiff_t>(ny))
            return direct(f);  // just outside the guaranteed cover: stay exact
        std::complex<double> acc{0.0, 0.0};
        for (int b = 0; b < py; ++b) {
            const cplx* row = lattice_.data() + (static_cast<std::size_t>(iy0 + b)) * nx +
                              static_cast<std::size_t>(ix0);
            std::complex<double> r{0.0, 0.0};
            for (int a = 0; a < px; ++a) r += wxs[a] * row[a];
            acc += wys[b] * r;
        }
        return acc;
    }

    const AtomicMeasure2D* mu_;
    double total_;
    double xi_max_;
    double cx_ = 0.0, cy_ = 0.0, wx_ = 0.0, wy_ = 0.0;
    bool lattice_active_ = false;
    int p_ = 12;
    Axis ax_, ay_;
    std::vector<cplx> lattice_;
};

}  // namespace muhat
