#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "muhat/decay.hpp"
#include "muhat/measures.hpp"
#include "muhat/parallel.hpp"
#include "muhat/quadrature.hpp"
#include "muhat/sum.hpp"

namespace muhat {

inline constexpr double kEnergyCollisionTol = 1e-14;

// Slice of mu by the tube t - delta <= x <= t + delta. tube_mass approximates
// the density of the sliced disintegration: collected mass / (2 delta).
struct TubeSlice {
    std::optional<AtomicMeasure1D> slice;  // renormalized to a probability measure
    std::vector<double> raw_y;             // slice support
    std::vector<double> raw_w;             // collected un-renormalized weights
    double tube_mass = 0.0;

    bool empty() const { return !slice.has_value(); }
};

inline TubeSlice slice_tube(const AtomicMeasure2D& mu, double t, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("slice_tube: delta must be > 0");
    const double total = mu.total_weight();
    TubeSlice out;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        if (std::abs(mu.x[j] - t) <= delta) {
            out.raw_y.push_back(mu.y[j]);
            out.raw_w.push_back(mu.w[j] / total);
        }
    }
    if (out.raw_y.empty()) return out;
    const double collected = pairwise_sum(out.raw_w);
    out.tube_mass = collected / (2.0 * delta);
    std::vector<double> wn(out.raw_w.size());
    for (std::size_t i = 0; i < wn.size(); ++i) wn[i] = out.raw_w[i] / collected;
    out.slice = AtomicMeasure1D(out.raw_y, std::move(wn));
    return out;
}

namespace detail {

// Off-diagonal double sum sum_{i != j} w_i w_j |t_i - t_j|^{-u} for arbitrary
// (not necessarily normalized) weights. Coincident pairs yield +inf. Row
// blocks are reduced in index order so threading cannot change the value.
inline double energy_sum(std::span<const double> pos, std::span<const double> w, double u,
                         unsigned threads = 0) {
    const std::size_t n = pos.size();
    if (n < 2) return 0.0;
    std::vector<double> row(n, 0.0);
    std::atomic<bool> collided{false};
    parallel_chunks(n, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                const double d = std::abs(pos[i] - pos[j]);
                if (d <= kEnergyCollisionTol) {
                    collided.store(true);
                    acc = std::numeric_limits<double>::infinity();
                    break;
                }
                acc += w[j] * std::pow(d, -u);
            }
            row[i] = w[i] * acc;
        }
    }, threads);
    if (collided.load()) return std::numeric_limits<double>::infinity();
    return pairwise_sum(row);
}

}  // namespace detail

// I_u(nu) = sum_{i != j} w_i w_j |t_i - t_j|^{-u}, the atomic proxy for the
// continuum Riesz u-energy. Distinct atoms closer than 1e-14 make the proxy
// meaningless and return +inf.
inline double riesz_energy(const AtomicMeasure1D& nu, double u, unsigned threads = 0) {
    if (!(u > 0.0 && u < 1.0)) throw std::domain_error("riesz_energy: u must be in (0,1)");
    const double total = nu.total_weight();
    std::vector<double> w(nu.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = nu.w[i] / total;
    return detail::energy_sum(nu.t, w, u, threads);
}

struct SliceEnergy {
    double t = 0.0;
    double tube_mass = 0.0;
    double energy = 0.0;  // may be +inf
};

struct EnergyReport {
    double s = 0.0;
    double delta = 0.0;
    std::vector<SliceEnergy> slices;
    double integral_estimate = 0.0;   // trapezoid of energy over the t grid
    double rhs_bound_estimate = 0.0;  // quadrature of |xi2|^{s-2} (1+|xi|)^{-tau} comparison
};

// (1/2pi) int_0^{2pi} |cos a|^{s-2} da: the angular factor that makes the
// comparison integral finite for s > 1. Evaluated by double-exponential
// quadrature against the integrable singularities at a = pi/2, 3pi/2.
inline double angular_kernel_integral(double s) {
    if (!(s > 1.0 && s < 2.0))
        throw std::domain_error("angular_kernel_integral: s must be in (1,2)");
    const double quarter = tanh_sinh(
        [&](double th) { return std::pow(std::cos(th), s - 2.0); }, 0.0,
        0.5 * std::numbers::pi, 1e-13);
    return 2.0 * quarter / std::numbers::pi;
}

// Per-slice (s-1)-energies of the tube slices plus both sides of the
// comparison: the t-integral of the energies and a frequency-side bound
// assembled from a decay estimate (|muhat|^2 on a polar grid up to the
// trusted cutoff, then the (1+|xi|)^{-tau} tail).
inline EnergyReport slice_energy_profile(const AtomicMeasure2D& mu, double s, double delta,
                                         std::vector<double> t_grid, const DecayEstimate& decay,
                                         unsigned threads = 0) {
    if (!(s > 1.0 && s < 2.0)) throw std::domain_error("slice_energy_profile: s must be in (1,2)");
    if (!(delta > 0.0)) throw std::domain_error("slice_energy_profile: delta must be > 0");
    if (t_grid.size() < 2) throw std::domain_error("slice_energy_profile: need at least 2 slice points");
    std::sort(t_grid.begin(), t_grid.end());

    EnergyReport rep;
    rep.s = s;
    rep.delta = delta;

    // Energies use the tube-scaled (un-renormalized) weights w/(2 delta) so
    // that integrating over t matches the sliced-energy integral.
    for (double t : t_grid) {
        TubeSlice ts = slice_tube(mu, t, delta);
        SliceEnergy se;
        se.t = t;
        se.tube_mass = ts.tube_mass;
        if (!ts.empty()) {
            std::vector<double> w(ts.raw_w.size());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = ts.raw_w[i] / (2.0 * delta);
            se.energy = detail::energy_sum(ts.raw_y, w, s - 1.0, threads);
        }
        rep.slices.push_back(se);
    }

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < rep.slices.size(); ++i) {
        const double dt = rep.slices[i + 1].t - rep.slices[i].t;
        integral += 0.5 * dt * (rep.slices[i].energy + rep.slices[i + 1].energy);
    }
    rep.integral_estimate = integral;

    // Frequency side. Numeric part: polar-grid quadrature of
    // |xi2|^{s-2} |muhat|^2 out to the decay estimate's last fitted annulus;
    // midpoint angles avoid the xi2 = 0 singularity. Tail: the fitted bound
    // C^2 (1+r)^{-tau} times the angular factor.
    const double tau = decay.exponent_s;
    const double C = decay.constant_C;
    double xi_hi = 0.0;
    for (const auto& a : decay.annuli)
        if (a.trusted) xi_hi = std::max(xi_hi, 2.0 * a.R);
    if (xi_hi == 0.0 && !decay.annuli.empty()) xi_hi = 2.0 * decay.annuli.back().R;
    if (xi_hi <= 0.0) throw std::domain_error("slice_energy_profile: decay estimate has no annuli");

    const double spu = default_samples_per_unit(mu);
    const double r_lo = 0.5;
    std::size_t n_r = static_cast<std::size_t>(std::ceil((xi_hi - r_lo) * spu)) + 1;
    n_r = std::max<std::size_t>(n_r, 8);
    std::size_t samples = 0;
    std::vector<std::size_t> ring_n(n_r);
    const double dr = (xi_hi - r_lo) / static_cast<double>(n_r);
    for (std::size_t i = 0; i < n_r; ++i) {
        ring_n[i] = detail::ring_angle_count(r_lo + dr * (static_cast<double>(i) + 0.5), spu);
        samples += ring_n[i];
    }
    SpectrumEvaluator engine(mu, xi_hi + dr, samples, threads);

    std::vector<double> ring_vals(n_r, 0.0);
    parallel_chunks(n_r, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = r_lo + dr * (static_cast<double>(i) + 0.5);
            const std::size_t na = ring_n[i];
            const double dth = 2.0 * std::numbers::pi / static_cast<double>(na);
            double acc = 0.0;
            for (std::size_t a = 0; a < na; ++a) {
                const double th = dth * (static_cast<double>(a) + 0.5);
                const double m = engine.modulus({r * std::cos(th), r * std::sin(th)});
                acc += std::pow(r * std::abs(std::sin(th)), s - 2.0) * m * m * dth;
            }
            ring_vals[i] = acc * r * dr;
        }
    }, threads);
    double rhs = pairwise_sum(ring_vals);

    // small-disc contribution with |muhat| <= 1
    const double K = angular_kernel_integral(s);
    rhs += 2.0 * std::numbers::pi * K * std::pow(r_lo, s) / s;

    // tail: C^2 * 2 pi K(s) * int_{xi_hi}^inf r^{s-1} (1+r)^{-tau} dr
    if (tau <= s) {
        rep.rhs_bound_estimate = std::numeric_limits<double>::infinity();
        return rep;
    }
    const double tail = tanh_sinh(
        [&](double v) {
            const double r = xi_hi / v;
            return std::pow(r, s - 1.0) * std::pow(1.0 + r, -tau) * xi_hi / (v * v);
        },
        0.0, 1.0, 1e-10);
    rhs += C * C * 2.0 * std::numbers::pi * K * tail;
    rep.rhs_bound_estimate = rhs;
    return rep;
}

}  // namespace muhat
