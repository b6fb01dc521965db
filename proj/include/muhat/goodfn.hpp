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

#include "muhat/graphs.hpp"
#include "muhat/measures.hpp"

namespace muhat {

// Thresholds of the good-function machinery. The cosine level and the pass
// bounds are exposed here rather than hard-coded at call sites; defaults are
// the values used throughout the verification suites.
struct GoodFunctionConfig {
    double cos_level = 0.99;        // both cos(2 pi N t) and cos(4 pi N t) must clear this
    double sum_bound = 0.42875;     // required |muhat(a) + muhat(b)| on the probe pair
    double max_bound = 0.2143;      // required max of the four probe moduli
    double tolerance = 1e-6;
};

inline bool cos_pair_ok(double t, std::int64_t N, double level = 0.99) {
    const double twopi = 2.0 * std::numbers::pi;
    const double a = twopi * static_cast<double>(N) * t;
    return std::cos(a) >= level && std::cos(2.0 * a) >= level;
}

// A staircase-with-near-vertical-patches function together with the split of
// its graph samples into the horizontal piece H (values on the 1/N lattice)
// and the vertical piece V (patch interiors, x within delta of the lattice).
struct GoodFunction {
    SampledFunction fn;
    std::int64_t N = 0;
    std::vector<std::size_t> horizontal_idx;
    std::vector<std::size_t> vertical_idx;
    double epsilon = 0.0;
    double delta = 0.0;

    void check_invariants(double cos_level = 0.99) const {
        std::vector<char> seen(fn.size(), 0);
        for (std::size_t i : horizontal_idx) {
            if (i >= fn.size() || seen[i]) throw std::logic_error("good function: bad H index set");
            seen[i] = 1;
            if (!cos_pair_ok(fn.values[i], N, cos_level))
                throw std::logic_error("good function: H value misses the cosine set");
        }
        for (std::size_t i : vertical_idx) {
            if (i >= fn.size() || seen[i]) throw std::logic_error("good function: bad V index set");
            seen[i] = 1;
            if (!cos_pair_ok(fn.xs[i], N, cos_level))
                throw std::logic_error("good function: V abscissa misses the cosine set");
        }
        for (char s : seen)
            if (!s) throw std::logic_error("good function: H and V do not cover the grid");
    }
};

namespace detail {

// nearest point of {k/N}, ties toward -inf
inline double nearest_lattice(double v, std::int64_t N) {
    const double t = v * static_cast<double>(N);
    const double lo = std::floor(t);
    const double m = (t - lo > 0.5) ? lo + 1.0 : lo;
    return m / static_cast<double>(N);
}

inline double oscillation_on(const SampledFunction& f, double a, double b) {
    double vmin = f.eval(a), vmax = vmin;
    const double vb = f.eval(b);
    vmin = std::min(vmin, vb);
    vmax = std::max(vmax, vb);
    const auto lo = std::lower_bound(f.xs.begin(), f.xs.end(), a);
    for (auto it = lo; it != f.xs.end() && *it <= b; ++it) {
        const double v = f.values[static_cast<std::size_t>(it - f.xs.begin())];
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    return vmax - vmin;
}

}  // namespace detail

// Builds g close to f: on each interval I_k = [(k-1)/N, k/N) the value is the
// lattice point q_k nearest to f(k/N), and each jump at k/N is bridged by one
// affine patch over [k/N - delta, k/N + delta]. N is the smallest power of
// two >= M for which per-interval oscillation plus lattice rounding stays
// below epsilon; that makes ||f - g||_inf < 2 epsilon.
inline GoodFunction good_function(const SampledFunction& f, std::int64_t M, double epsilon,
                                  const GoodFunctionConfig& cfg = {}) {
    if (M < 1) throw std::domain_error("good_function: M must be >= 1");
    if (!(epsilon > 0.0)) throw std::domain_error("good_function: epsilon must be > 0");
    if (std::abs(f.xs.front()) > kCoalesceTol || std::abs(f.xs.back() - 1.0) > kCoalesceTol)
        throw std::domain_error("good_function: f must be sampled on all of [0,1]");

    // grid must resolve every interval; require >= 2 samples per interval
    const std::int64_t n_cap = static_cast<std::int64_t>(f.size() / 2);

    std::int64_t N = 1;
    while (N < M) N *= 2;
    std::vector<double> q;
    bool found = false;
    for (; N <= n_cap; N *= 2) {
        const double h = 1.0 / static_cast<double>(N);
        q.assign(static_cast<std::size_t>(N) + 1, 0.0);
        double worst = 0.0;
        for (std::int64_t k = 1; k <= N; ++k) {
            const double fk = f.eval(std::min(1.0, static_cast<double>(k) * h));
            q[static_cast<std::size_t>(k)] = detail::nearest_lattice(fk, N);
            const double osc = detail::oscillation_on(f, static_cast<double>(k - 1) * h,
                                                      std::min(1.0, static_cast<double>(k) * h));
            const double rounding = std::abs(q[static_cast<std::size_t>(k)] - fk);
            worst = std::max(worst, osc + rounding);
        }
        if (worst < epsilon) {
            found = true;
            break;
        }
    }
    if (!found)
        throw std::domain_error(
            "good_function: no admissible N fits the sampled grid; sample f on a finer grid "
            "or increase epsilon");

    const double h = 1.0 / static_cast<double>(N);
    const double delta = 0.9 * std::acos(cfg.cos_level) /
                         (4.0 * std::numbers::pi * static_cast<double>(N));

    GoodFunction g;
    g.N = N;
    g.epsilon = epsilon;
    g.delta = delta;

    std::vector<double> xs, vals;
    std::vector<char> vertical;
    auto push = [&](double x, double v, bool vert) {
        if (!xs.empty() && x - xs.back() <= kCoalesceTol) return;
        xs.push_back(x);
        vals.push_back(v);
        vertical.push_back(vert ? 1 : 0);
    };

    // samples per flat piece: enough to dominate the patch count
    const int flat_pts = 6;
    for (std::int64_t k = 1; k <= N; ++k) {
        const double qk = q[static_cast<std::size_t>(k)];
        const bool jump_left = k > 1 && q[static_cast<std::size_t>(k - 1)] != qk;
        const bool jump_right = k < N && q[static_cast<std::size_t>(k + 1)] != qk;
        const double a = static_cast<double>(k - 1) * h + (jump_left ? delta : 0.0);
        const double b = std::min(1.0, static_cast<double>(k) * h) - (jump_right ? delta : 0.0);
        for (int i = 0; i < flat_pts; ++i)
            push(a + (b - a) * static_cast<double>(i) / (flat_pts - 1), qk, false);
        if (jump_right) {
            const double qn = q[static_cast<std::size_t>(k + 1)];
            const double x0 = static_cast<double>(k) * h - delta;
            const double x1 = static_cast<double>(k) * h + delta;
            for (int i = 1; i < 4; ++i) {
                const double t = static_cast<double>(i) / 4.0;
                push(x0 + t * (x1 - x0), qk + t * (qn - qk), true);
            }
        }
    }

    g.fn = SampledFunction(std::move(xs), std::move(vals));
    for (std::size_t i = 0; i < vertical.size(); ++i)
        (vertical[i] ? g.vertical_idx : g.horizontal_idx).push_back(i);

    g.check_invariants(cfg.cos_level);

    // ||f - g||_inf < 2 epsilon, checked on the union of both grids
    double sup = 0.0;
    for (std::size_t i = 0; i < g.fn.size(); ++i)
        sup = std::max(sup, std::abs(f.eval(g.fn.xs[i]) - g.fn.values[i]));
    for (std::size_t i = 0; i < f.size(); ++i)
        sup = std::max(sup, std::abs(f.values[i] - g.fn.eval(f.xs[i])));
    if (!(sup < 2.0 * epsilon))
        throw std::logic_error("good_function: construction exceeded the 2*epsilon bound");
    return g;
}

// Outcome of probing a measure on G_g at the four frequencies
// (0,N), (N,0), (0,2N), (2N,0).
struct GoodBoundReport {
    double mass_H = 0.0;
    double mass_V = 0.0;
    bool branch_horizontal = true;  // which projection the sum bound used
    double sum_bound_value = 0.0;
    double four_moduli[4] = {0, 0, 0, 0};  // |mu^(0,N)|, |mu^(N,0)|, |mu^(0,2N)|, |mu^(2N,0)|
    bool passes = false;
};

// Checks the non-decay certificate: whichever of H/V carries mass >= 1/2,
// the matching probe pair satisfies |muhat(a) + muhat(b)| >= sum_bound, and
// consequently one of the four probe moduli is >= max_bound.
inline GoodBoundReport verify_good_bound(const GoodFunction& g, const AtomicMeasure2D& mu,
                                         const GoodFunctionConfig& cfg = {}) {
    std::vector<char> is_vertical(g.fn.size(), 0);
    for (std::size_t i : g.vertical_idx) is_vertical[i] = 1;

    const double total = mu.total_weight();
    double mass_h = 0.0, mass_v = 0.0;
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const std::size_t idx = g.fn.find_index(mu.x[j]);
        if (idx == static_cast<std::size_t>(-1) ||
            std::abs(mu.y[j] - g.fn.values[idx]) > kGraphMemberTol)
            throw std::domain_error("verify_good_bound: atom " + std::to_string(j) +
                                    " cannot be classified as H or V (not on the graph)");
        (is_vertical[idx] ? mass_v : mass_h) += mu.w[j] / total;
    }

    const double N = static_cast<double>(g.N);
    const FrequencyPoint probes[4] = {{0.0, N}, {N, 0.0}, {0.0, 2.0 * N}, {2.0 * N, 0.0}};
    const auto vals = ft_eval(mu, std::span<const FrequencyPoint>(probes, 4));

    GoodBoundReport rep;
    rep.mass_H = mass_h;
    rep.mass_V = mass_v;
    for (int i = 0; i < 4; ++i) rep.four_moduli[i] = std::abs(vals[static_cast<std::size_t>(i)]);
    rep.branch_horizontal = mass_h >= 0.5;
    rep.sum_bound_value = rep.branch_horizontal ? std::abs(vals[0] + vals[2])
                                                : std::abs(vals[1] + vals[3]);
    const double m4 = std::max({rep.four_moduli[0], rep.four_moduli[1], rep.four_moduli[2],
                                rep.four_moduli[3]});
    rep.passes = rep.sum_bound_value >= cfg.sum_bound - cfg.tolerance &&
                 m4 >= cfg.max_bound - cfg.tolerance;
    return rep;
}

// min over a uniform grid of cos(a) + cos(2a); the true minimum is -9/8 at
// cos(a) = -1/4.
struct CosineMinScan {
    double min_value = 0.0;
    double cos_at_argmin = 0.0;
};

inline CosineMinScan cosine_min_scan(std::size_t points = 1000000) {
    if (points < 3) throw std::domain_error("cosine_min_scan: need at least 3 points");
    CosineMinScan out;
    out.min_value = 4.0;
    const double twopi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < points; ++i) {
        const double a = twopi * static_cast<double>(i) / static_cast<double>(points);
        const double v = std::cos(a) + std::cos(2.0 * a);
        if (v < out.min_value) {
            out.min_value = v;
            out.cos_at_argmin = std::cos(a);
        }
    }
    return out;
}

}  // namespace muhat
