#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "muhat/measures.hpp"
#include "muhat/nufft.hpp"
#include "muhat/parallel.hpp"

namespace muhat {

struct AnnulusStat {
    double R = 0.0;            // inner radius; the annulus is R <= |xi| <= 2R
    double sup_modulus = 0.0;
    FrequencyPoint argmax;
    bool trusted = true;       // within the atomic-resolution cutoff
};

// Per-annulus suprema plus the fitted decay exponent for
// |muhat(xi)| <= C |xi|^{-s/2}.
struct DecayEstimate {
    std::vector<AnnulusStat> annuli;
    double fitted_slope = 0.0;    // OLS slope of log2 sup vs log2 R
    double exponent_s = 0.0;      // -2 * slope, clamped to [0, 2]
    double conservative_s = 0.0;  // from the steepest pairwise slope (upper envelope)
    double constant_C = 0.0;      // max over fit annuli of sup * R^{s/2}
    double resolution_cutoff = std::numeric_limits<double>::infinity();
    bool resolution_warning = false;
};

// M atoms approximating a continuous measure alias above |xi| ~ M/diam;
// stay a factor 16 below that.
inline double resolution_cutoff(const AtomicMeasure2D& mu) {
    const double diam = mu.support_diameter();
    if (diam <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(mu.size()) / (16.0 * diam);
}

inline double default_samples_per_unit(const AtomicMeasure2D& mu) {
    return std::max(4.0 * mu.support_diameter(), 1.0);
}

namespace detail {

// Ring angles come in multiples of 4 so every ring contains the four axis
// points (+-r, 0), (0, +-r); the extremal graph examples peak exactly there.
inline std::size_t ring_angle_count(double radius, double spu) {
    const double arc = 2.0 * std::numbers::pi * radius * spu;
    std::size_t n = static_cast<std::size_t>(std::ceil(std::max(arc, 4.0)));
    return (n + 3) / 4 * 4;
}

}  // namespace detail

// Max of |muhat| over a polar grid of the annulus R <= |xi| <= 2R with both
// radial and arc spacing <= 1/samples_per_unit. Deterministic: ties resolve
// to the smallest (ring, angle) pair, independent of threading.
inline AnnulusStat annulus_sup(const AtomicMeasure2D& mu, double R, double samples_per_unit,
                               const SpectrumEvaluator* engine = nullptr, unsigned threads = 0) {
    if (!(R > 0.0)) throw std::domain_error("annulus_sup: R must be > 0");
    if (!(samples_per_unit > 0.0)) throw std::domain_error("annulus_sup: sampling density must be > 0");

    const std::size_t n_r = static_cast<std::size_t>(std::ceil(R * samples_per_unit)) + 1;
    const double dr = R / static_cast<double>(n_r - 1);

    std::size_t total = 0;
    std::vector<std::size_t> ring_n(n_r);
    for (std::size_t i = 0; i < n_r; ++i) {
        ring_n[i] = detail::ring_angle_count(R + dr * static_cast<double>(i), samples_per_unit);
        total += ring_n[i];
    }

    SpectrumEvaluator local = engine ? SpectrumEvaluator(mu, 0.0, 0)  // unused shell
                                     : SpectrumEvaluator(mu, 2.0 * R, total, threads);
    const SpectrumEvaluator& ev = engine ? *engine : local;

    struct Best {
        double mod = -1.0;
        std::size_t ring = 0, angle = 0;
    };
    const unsigned t = resolve_threads(threads);
    std::vector<Best> best(t);
    const std::size_t chunk = (n_r + t - 1) / t;
    parallel_chunks(n_r, [&](std::size_t lo, std::size_t hi) {
        Best b;
        for (std::size_t i = lo; i < hi; ++i) {
            const double r = R + dr * static_cast<double>(i);
            const std::size_t na = ring_n[i];
            const double dth = 2.0 * std::numbers::pi / static_cast<double>(na);
            for (std::size_t a = 0; a < na; ++a) {
                const double th = dth * static_cast<double>(a);
                const double m = ev.modulus({r * std::cos(th), r * std::sin(th)});
                if (m > b.mod) b = {m, i, a};
            }
        }
        best[lo / chunk] = b;
    }, t);

    Best win;
    for (const Best& b : best)
        if (b.mod > win.mod || (b.mod == win.mod && (b.ring < win.ring || (b.ring == win.ring && b.angle < win.angle))))
            win = b;

    AnnulusStat st;
    st.R = R;
    st.sup_modulus = win.mod;
    const double r = R + dr * static_cast<double>(win.ring);
    const double th = 2.0 * std::numbers::pi * static_cast<double>(win.angle) /
                      static_cast<double>(ring_n[win.ring]);
    st.argmax = {r * std::cos(th), r * std::sin(th)};
    return st;
}

// Annulus suprema on geometrically spaced annuli plus the log-log fit.
// The fit uses the annuli inside the resolution cutoff whenever at least two
// of them exist; annuli beyond the cutoff are kept in the table but flagged.
inline DecayEstimate decay_exponent(const AtomicMeasure2D& mu, double R_min, double R_max,
                                    int annuli_per_octave, double samples_per_unit = 0.0,
                                    unsigned threads = 0) {
    if (!(R_min > 0.0) || !(R_max > R_min))
        throw std::domain_error("decay_exponent: need 0 < R_min < R_max");
    if (annuli_per_octave < 1) throw std::domain_error("decay_exponent: annuli_per_octave must be >= 1");
    const double spu = samples_per_unit > 0.0 ? samples_per_unit : default_samples_per_unit(mu);

    std::vector<double> radii;
    const double step = std::pow(2.0, 1.0 / static_cast<double>(annuli_per_octave));
    for (double R = R_min; 2.0 * R <= R_max * (1.0 + 1e-9); R *= step) radii.push_back(R);
    if (radii.size() < 2)
        throw std::domain_error("decay_exponent: fewer than 2 annuli fit in [R_min, R_max]");

    DecayEstimate est;
    est.resolution_cutoff = resolution_cutoff(mu);

    std::size_t total_samples = 0;
    for (double R : radii) {
        const std::size_t n_r = static_cast<std::size_t>(std::ceil(R * spu)) + 1;
        total_samples += n_r * detail::ring_angle_count(1.5 * R, spu);
    }
    SpectrumEvaluator engine(mu, 2.0 * radii.back(), total_samples, threads);

    for (double R : radii) {
        AnnulusStat st = annulus_sup(mu, R, spu, &engine, threads);
        st.trusted = 2.0 * R <= est.resolution_cutoff;
        if (!st.trusted) est.resolution_warning = true;
        est.annuli.push_back(st);
    }

    std::vector<const AnnulusStat*> fit;
    for (const auto& a : est.annuli)
        if (a.trusted) fit.push_back(&a);
    if (fit.size() < 2) {
        fit.clear();
        for (const auto& a : est.annuli) fit.push_back(&a);
    }

    const double floor_log = -360.0;  // log2 of the smallest useful modulus
    auto log2_sup = [&](const AnnulusStat* a) {
        return a->sup_modulus > 0.0 ? std::log2(a->sup_modulus) : floor_log;
    };

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const AnnulusStat* a : fit) {
        const double lx = std::log2(a->R), ly = log2_sup(a);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    }
    const double n = static_cast<double>(fit.size());
    est.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    est.exponent_s = std::clamp(-2.0 * est.fitted_slope, 0.0, 2.0);

    double steepest = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fit.size(); ++i)
        for (std::size_t j = i + 1; j < fit.size(); ++j) {
            const double slope = (log2_sup(fit[j]) - log2_sup(fit[i])) /
                                 (std::log2(fit[j]->R) - std::log2(fit[i]->R));
            steepest = std::max(steepest, slope);
        }
    est.conservative_s = std::clamp(-2.0 * steepest, 0.0, 2.0);

    double c = 0.0;
    for (const AnnulusStat* a : fit)
        c = std::max(c, a->sup_modulus * std::pow(a->R, 0.5 * est.exponent_s));
    est.constant_C = c;
    return est;
}

}  // namespace muhat
