#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "muhat/parallel.hpp"
#include "muhat/sum.hpp"

namespace muhat {

inline constexpr double kWeightSumTol = 1e-12;   // probability measures sum to 1
inline constexpr double kCoalesceTol = 1e-12;    // positions closer than this are one atom
inline constexpr double kGraphMemberTol = 1e-9;  // vertical slack for "lies on the graph"

struct FrequencyPoint {
    double xi1 = 0.0;
    double xi2 = 0.0;
};

inline double norm2(const FrequencyPoint& f) { return std::hypot(f.xi1, f.xi2); }

namespace detail {
inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}
}  // namespace detail

// Finite weighted point set in the plane, used as a Borel probability
// measure. Weights are kept as given (they must sum to 1 within 1e-12);
// Fourier sums divide by the pairwise-summed total so that muhat(0) == 1
// exactly for every valid measure.
struct AtomicMeasure2D {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> w;

    AtomicMeasure2D() = default;
    AtomicMeasure2D(std::vector<double> xs, std::vector<double> ys, std::vector<double> ws)
        : x(std::move(xs)), y(std::move(ys)), w(std::move(ws)) {
        validate();
    }

    std::size_t size() const { return x.size(); }

    double total_weight() const { return pairwise_sum(w); }

    void validate() const {
        if (x.empty()) throw std::invalid_argument("measure: atom list is empty");
        if (x.size() != y.size() || x.size() != w.size())
            throw std::invalid_argument("measure: atoms/weights length mismatch");
        for (std::size_t i = 0; i < x.size(); ++i) {
            detail::require_finite(x[i], "atom position");
            detail::require_finite(y[i], "atom position");
            detail::require_finite(w[i], "weight");
            if (w[i] < 0.0) throw std::invalid_argument("measure: negative weight");
        }
        const double total = total_weight();
        if (std::abs(total - 1.0) > kWeightSumTol)
            throw std::invalid_argument("measure: weights sum to " + std::to_string(total) +
                                        ", expected 1 within 1e-12");
    }

    // Bounding box; the diagonal serves as the support-diameter proxy used
    // for sampling densities and resolution cutoffs (an overestimate by at
    // most sqrt(2), which errs on the fine-sampling side).
    void bounds(double& x0, double& x1, double& y0, double& y1) const {
        const auto [xmin, xmax] = std::minmax_element(x.begin(), x.end());
        const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
        x0 = *xmin; x1 = *xmax; y0 = *ymin; y1 = *ymax;
    }

    double support_diameter() const {
        double x0, x1, y0, y1;
        bounds(x0, x1, y0, y1);
        return std::hypot(x1 - x0, y1 - y0);
    }
};

// 1D sibling of AtomicMeasure2D.
struct AtomicMeasure1D {
    std::vector<double> t;
    std::vector<double> w;

    AtomicMeasure1D() = default;
    AtomicMeasure1D(std::vector<double> ts, std::vector<double> ws)
        : t(std::move(ts)), w(std::move(ws)) {
        validate();
    }

    std::size_t size() const { return t.size(); }
    double total_weight() const { return pairwise_sum(w); }

    void validate() const {
        if (t.empty()) throw std::invalid_argument("measure: atom list is empty");
        if (t.size() != w.size()) throw std::invalid_argument("measure: atoms/weights length mismatch");
        for (std::size_t i = 0; i < t.size(); ++i) {
            detail::require_finite(t[i], "atom position");
            detail::require_finite(w[i], "weight");
            if (w[i] < 0.0) throw std::invalid_argument("measure: negative weight");
        }
        const double total = total_weight();
        if (std::abs(total - 1.0) > kWeightSumTol)
            throw std::invalid_argument("measure: weights sum to " + std::to_string(total) +
                                        ", expected 1 within 1e-12");
    }
};

// muhat(xi) = (1/W) sum_j w_j e^{-2pi i (x_j xi1 + y_j xi2)}, W = sum w_j.
// Exact nonuniform sum, no truncation; pairwise-summed in a fixed order so
// results do not depend on the thread count.
inline std::vector<std::complex<double>> ft_eval(const AtomicMeasure2D& mu,
                                                 std::span<const FrequencyPoint> freqs,
                                                 unsigned threads = 0) {
    for (const auto& f : freqs) {
        detail::require_finite(f.xi1, "frequency");
        detail::require_finite(f.xi2, "frequency");
    }
    const double total = mu.total_weight();
    std::vector<std::complex<double>> out(freqs.size());
    const double twopi = 2.0 * std::numbers::pi;
    parallel_chunks(freqs.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double f1 = freqs[k].xi1, f2 = freqs[k].xi2;
            const std::complex<double> s =
                pairwise_sum_n<std::complex<double>>(0, mu.size(), [&](std::size_t j) {
                    const double phase = -twopi * (mu.x[j] * f1 + mu.y[j] * f2);
                    return std::complex<double>(mu.w[j] * std::cos(phase),
                                                mu.w[j] * std::sin(phase));
                });
            out[k] = s / total;
        }
    }, threads);
    return out;
}

inline std::complex<double> ft_eval_point(const AtomicMeasure2D& mu, FrequencyPoint f) {
    return ft_eval(mu, std::span<const FrequencyPoint>(&f, 1), 1)[0];
}

inline std::vector<std::complex<double>> ft_eval(const AtomicMeasure1D& nu,
                                                 std::span<const double> ts,
                                                 unsigned threads = 0) {
    for (double s : ts) detail::require_finite(s, "frequency");
    const double total = nu.total_weight();
    std::vector<std::complex<double>> out(ts.size());
    const double twopi = 2.0 * std::numbers::pi;
    parallel_chunks(ts.size(), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const double s =
                ts[k];
            const std::complex<double> acc =
                pairwise_sum_n<std::complex<double>>(0, nu.size(), [&](std::size_t j) {
                    const double phase = -twopi * nu.t[j] * s;
                    return std::complex<double>(nu.w[j] * std::cos(phase),
                                                nu.w[j] * std::sin(phase));
                });
            out[k] = acc / total;
        }
    }, threads);
    return out;
}

inline std::complex<double> ft_eval_point(const AtomicMeasure1D& nu, double t) {
    return ft_eval(nu, std::span<const double>(&t, 1), 1)[0];
}

// Groups positions that agree within kCoalesceTol (adjacent-gap rule on the
// sorted sequence) and returns one (position, mass) pair per group. Group
// position is its first (smallest) member; masses are pairwise sums.
inline AtomicMeasure1D coalesce(const AtomicMeasure1D& nu) {
    std::vector<std::size_t> idx(nu.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return nu.t[a] < nu.t[b] || (nu.t[a] == nu.t[b] && a < b);
    });
    std::vector<double> pos, mass;
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && nu.t[idx[j + 1]] - nu.t[idx[j]] <= kCoalesceTol) ++j;
        pos.push_back(nu.t[idx[i]]);
        mass.push_back(pairwise_sum_n<double>(i, j + 1, [&](std::size_t k) { return nu.w[idx[k]]; }));
        i = j + 1;
    }
    AtomicMeasure1D out;
    out.t = std::move(pos);
    out.w = std::move(mass);
    return out;  // not re-validated: total weight is preserved by construction
}

// Coalesced atom masses nu({t}); their squares sum to the lambda -> 0 limit
// of the autocorrelation mass.
inline std::vector<double> atom_masses(const AtomicMeasure1D& nu) {
    return coalesce(nu).w;
}

// Pushforward of mu under x -> e . x for a unit vector e. Projected atoms
// that collide within kCoalesceTol are merged.
inline AtomicMeasure1D project_1d(const AtomicMeasure2D& mu, double e1, double e2) {
    if (std::abs(std::hypot(e1, e2) - 1.0) > 1e-12)
        throw std::domain_error("project_1d: direction must be a unit vector (|e| = 1 within 1e-12)");
    AtomicMeasure1D nu;
    nu.t.resize(mu.size());
    nu.w = mu.w;
    for (std::size_t j = 0; j < mu.size(); ++j) nu.t[j] = e1 * mu.x[j] + e2 * mu.y[j];
    AtomicMeasure1D merged = coalesce(nu);
    merged.validate();
    return merged;
}

// C(lambda) = sum over pairs with |t_i - t_j| <= lambda of w_i w_j, the
// exact atomic value of int nu([t-lambda, t+lambda]) dnu(t). Atoms are
// coalesced first so the lambda -> 0 limit is the sum of squared atom
// masses, exactly.
inline double autocorrelation_mass(const AtomicMeasure1D& nu, double lambda) {
    if (!(lambda > 0.0)) throw std::domain_error("autocorrelation_mass: lambda must be > 0");
    const AtomicMeasure1D c = coalesce(nu);
    const std::size_t n = c.size();
    double acc = 0.0;
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (lo < n && c.t[lo] < c.t[i] - lambda) ++lo;
        if (hi < i + 1) hi = i + 1;
        while (hi < n && c.t[hi] <= c.t[i] + lambda) ++hi;
        double window = 0.0;
        for (std::size_t j = lo; j < hi; ++j) window += c.w[j];
        acc += c.w[i] * window;
    }
    return acc;
}

}  // namespace muhat
