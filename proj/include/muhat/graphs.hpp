#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "muhat/measures.hpp"

namespace muhat {

// A function on a finite grid of a closed E in [0,1]; carries the graph
// G_f = {(x, f(x))} implicitly. Evaluation between grid points is linear.
struct SampledFunction {
    std::vector<double> xs;
    std::vector<double> values;

    SampledFunction() = default;
    SampledFunction(std::vector<double> x, std::vector<double> v)
        : xs(std::move(x)), values(std::move(v)) {
        validate();
    }

    std::size_t size() const { return xs.size(); }

    void validate() const {
        if (xs.empty()) throw std::invalid_argument("function: empty grid");
        if (xs.size() != values.size())
            throw std::invalid_argument("function: grid/value length mismatch");
        for (std::size_t i = 0; i < xs.size(); ++i) {
            detail::require_finite(xs[i], "grid point");
            detail::require_finite(values[i], "value");
            if (xs[i] < 0.0 || xs[i] > 1.0)
                throw std::invalid_argument("function: grid point outside [0,1]");
            if (i > 0 && !(xs[i] > xs[i - 1]))
                throw std::invalid_argument("function: grid must be strictly increasing");
        }
    }

    // index of the grid point equal to x within tol, or npos
    std::size_t find_index(double x, double tol = kCoalesceTol) const {
        const auto it = std::lower_bound(xs.begin(), xs.end(), x);
        std::size_t best = static_cast<std::size_t>(-1);
        double d = tol;
        for (auto c : {it, it == xs.begin() ? it : std::prev(it)}) {
            if (c != xs.end() && std::abs(*c - x) <= d) {
                d = std::abs(*c - x);
                best = static_cast<std::size_t>(c - xs.begin());
            }
        }
        return best;
    }

    // piecewise-linear evaluation; x must lie inside [xs.front(), xs.back()]
    double eval(double x) const {
        if (x <= xs.front()) {
            if (xs.front() - x > kCoalesceTol)
                throw std::domain_error("function: evaluation left of the grid");
            return values.front();
        }
        if (x >= xs.back()) {
            if (x - xs.back() > kCoalesceTol)
                throw std::domain_error("function: evaluation right of the grid");
            return values.back();
        }
        const std::size_t hi = static_cast<std::size_t>(
            std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
        const std::size_t lo = hi - 1;
        const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
        return values[lo] + t * (values[hi] - values[lo]);
    }

    double sup_norm_diff(const SampledFunction& other) const {
        if (xs.size() != other.xs.size())
            throw std::invalid_argument("sup_norm_diff: functions must share a grid");
        double m = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i)
            m = std::max(m, std::abs(values[i] - other.values[i]));
        return m;
    }

    double oscillation() const {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return *hi - *lo;
    }
};

inline AtomicMeasure1D uniform_base(const SampledFunction& f) {
    const double w = 1.0 / static_cast<double>(f.size());
    return AtomicMeasure1D(f.xs, std::vector<double>(f.size(), w));
}

// Pushforward of `base` under t -> (t, f(t)). Base atoms must sit on the
// grid of f unless interpolation is requested.
inline AtomicMeasure2D graph_pushforward(const SampledFunction& f, const AtomicMeasure1D& base,
                                         bool interpolate = false) {
    std::vector<double> x(base.size()), y(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) {
        const double t = base.t[j];
        const std::size_t idx = f.find_index(t);
        if (idx != static_cast<std::size_t>(-1)) {
            x[j] = t;
            y[j] = f.values[idx];
        } else if (interpolate) {
            x[j] = t;
            y[j] = f.eval(t);
        } else {
            throw std::domain_error("graph_pushforward: base atom " + std::to_string(j) +
                                    " at t=" + std::to_string(t) +
                                    " is off the grid (pass interpolate to allow)");
        }
    }
    return AtomicMeasure2D(std::move(x), std::move(y), base.w);
}

inline AtomicMeasure2D graph_measure(const SampledFunction& f) {
    return graph_pushforward(f, uniform_base(f));
}

// T_{g,h}: (x, g(x)) -> (x, h(x)). Atoms must lie on G_g within the vertical
// tolerance; weights ride along. The Fourier transforms of input and output
// differ by at most 2*pi*|xi|*||g-h||_inf at every frequency.
inline AtomicMeasure2D transport(const AtomicMeasure2D& mu, const SampledFunction& g,
                                 const SampledFunction& h) {
    if (g.size() != h.size())
        throw std::invalid_argument("transport: g and h must share a grid");
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.xs[i] - h.xs[i]) > kCoalesceTol)
            throw std::invalid_argument("transport: g and h must share a grid");

    std::vector<double> y(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        const std::size_t idx = g.find_index(mu.x[j]);
        if (idx == static_cast<std::size_t>(-1))
            throw std::domain_error("transport: atom " + std::to_string(j) + " at x=" +
                                    std::to_string(mu.x[j]) + " is not on the grid of g");
        if (std::abs(mu.y[j] - g.values[idx]) > kGraphMemberTol)
            throw std::domain_error("transport: atom " + std::to_string(j) + " at (" +
                                    std::to_string(mu.x[j]) + ", " + std::to_string(mu.y[j]) +
                                    ") is not on the graph of g");
        y[j] = h.values[idx];
    }
    return AtomicMeasure2D(mu.x, std::move(y), mu.w);
}

// Extends f from its grid E to all of [0,1]: affine on the complementary
// intervals, unchanged on E. The output grid is the uniform grid refined by
// E itself, so restricting back to E reproduces f bit-for-bit.
inline SampledFunction affine_extend(const SampledFunction& f, std::size_t grid_points = 1025) {
    if (grid_points < 2) throw std::invalid_argument("affine_extend: need at least 2 grid points");
    if (std::abs(f.xs.front()) > kCoalesceTol || std::abs(f.xs.back() - 1.0) > kCoalesceTol)
        throw std::domain_error(
            "affine_extend: E must contain both endpoints 0 and 1; add endpoint values first");

    std::vector<double> xs;
    xs.reserve(grid_points + f.size());
    std::size_t ei = 0;
    for (std::size_t i = 0; i < grid_points; ++i) {
        const double u = static_cast<double>(i) / static_cast<double>(grid_points - 1);
        while (ei < f.size() && f.xs[ei] < u - kCoalesceTol) xs.push_back(f.xs[ei++]);
        if (ei < f.size() && std::abs(f.xs[ei] - u) <= kCoalesceTol) {
            xs.push_back(f.xs[ei++]);  // keep the E point verbatim
        } else {
            xs.push_back(u);
        }
    }
    while (ei < f.size()) xs.push_back(f.xs[ei++]);

    std::vector<double> vals(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t idx = f.find_index(xs[i]);
        vals[i] = idx != static_cast<std::size_t>(-1) ? f.values[idx] : f.eval(xs[i]);
    }
    return SampledFunction(std::move(xs), std::move(vals));
}

// Box-counting estimate of the graph's upper box dimension from column
// oscillations at dyadic scales 2^-3 .. 2^-floor(log2(n)/2).
inline double box_dimension(const SampledFunction& f) {
    const std::size_t n = f.size();
    if (n < 1024) throw std::domain_error("box_dimension: need at least 2^10 grid points");
    const double span = f.xs.back() - f.xs.front();
    const double gap = span / static_cast<double>(n - 1);
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(f.xs[i] - f.xs[i - 1] - gap) > 1e-9 * span)
            throw std::domain_error("box_dimension: grid must be uniform");

    const int jmax = static_cast<int>(std::floor(std::log2(static_cast<double>(n)) / 2.0));
    std::vector<double> lx, ly;
    for (int j = 3; j <= jmax; ++j) {
        const std::size_t cols = std::size_t{1} << j;
        const std::size_t width = n / cols;
        const double eps = static_cast<double>(width) * gap;
        double count = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t lo = c * width;
            const std::size_t hi = std::min(n - 1, (c + 1) * width);  // share the edge sample
            double vmin = f.values[lo], vmax = f.values[lo];
            for (std::size_t i = lo + 1; i <= hi; ++i) {
                vmin = std::min(vmin, f.values[i]);
                vmax = std::max(vmax, f.values[i]);
            }
            count += std::floor((vmax - vmin) / eps) + 1.0;
        }
        lx.push_back(static_cast<double>(j));  // log2(1/eps) up to the fixed span offset
        ly.push_back(std::log2(count));
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i]; sy += ly[i]; sxx += lx[i] * lx[i]; sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return std::clamp(slope, 1.0, 2.0);
}

}  // namespace muhat
