#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "muhat/decay.hpp"
#include "muhat/gen.hpp"
#include "muhat/goodfn.hpp"
#include "muhat/graphs.hpp"
#include "muhat/measures.hpp"
#include "muhat/rng.hpp"

namespace muhat {

inline std::vector<double> random_weights(Rng& rng, std::size_t m) {
    std::vector<double> w(m);
    for (double& v : w) v = -std::log(1.0 - rng.uniform());
    const double total = pairwise_sum(w);
    for (double& v : w) v /= total;
    return w;
}

inline AtomicMeasure2D random_measure_on_graph(Rng& rng, const SampledFunction& f) {
    return graph_pushforward(f, AtomicMeasure1D(f.xs, random_weights(rng, f.size())));
}

// Smooth trigonometric polynomial with values comfortably inside [0,1].
inline SampledFunction random_smooth_function(Rng& rng, std::size_t n) {
    std::vector<double> xs(n), vals(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    const double twopi = 2.0 * std::numbers::pi;
    for (int k = 1; k <= 6; ++k) {
        const double a = rng.uniform(-1.0, 1.0) / (k * k);
        const double b = rng.uniform(-1.0, 1.0) / (k * k);
        for (std::size_t i = 0; i < n; ++i)
            vals[i] += a * std::cos(twopi * k * xs[i]) + b * std::sin(twopi * k * xs[i]);
    }
    double m = 1e-12;
    for (double v : vals) m = std::max(m, std::abs(v));
    for (double& v : vals) v = 0.5 + 0.35 * v / m;
    return SampledFunction(std::move(xs), std::move(vals));
}

// --- transport stability -----------------------------------------------

struct TransportSuiteReport {
    std::size_t trials = 0;
    std::size_t violations = 0;
    double max_excess = -1.0;  // max of |muhat - nuhat| - 2 pi |xi| ||g-h||
};

// Randomized check that moving a graph measure from G_g to G_h shifts the
// Fourier transform by at most 2 pi |xi| ||g - h||_inf (plus 1e-9 slack).
inline TransportSuiteReport run_transport_suite(std::uint64_t seed, std::size_t trials,
                                                std::size_t grid_n = 129, double xi_max = 256.0,
                                                double max_diff = 0.1) {
    Rng rng(seed);
    TransportSuiteReport rep;
    rep.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const SampledFunction g = random_smooth_function(rng, grid_n);
        SampledFunction h = g;
        {
            const SampledFunction bump = random_smooth_function(rng, grid_n);
            const double scale = max_diff * rng.uniform();
            double bmax = 1e-12;
            for (double v : bump.values) bmax = std::max(bmax, std::abs(v - 0.5));
            for (std::size_t i = 0; i < h.size(); ++i)
                h.values[i] += scale * (bump.values[i] - 0.5) / bmax;
        }
        const AtomicMeasure2D mu = random_measure_on_graph(rng, g);
        const AtomicMeasure2D nu = transport(mu, g, h);

        const double r = xi_max * std::sqrt(rng.uniform());
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const FrequencyPoint xi{r * std::cos(a), r * std::sin(a)};

        const double lhs = std::abs(ft_eval_point(mu, xi) - ft_eval_point(nu, xi));
        const double bound = 2.0 * std::numbers::pi * norm2(xi) * g.sup_norm_diff(h);
        rep.max_excess = std::max(rep.max_excess, lhs - bound);
        if (lhs > bound + 1e-9) ++rep.violations;
    }
    return rep;
}

// --- good-function non-decay -------------------------------------------

struct GoodFnSuiteReport {
    std::size_t functions = 0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double min_sum_bound = 4.0;
    double min_max_modulus = 4.0;
};

inline std::vector<SampledFunction> goodfn_suite_bases(Rng& rng) {
    std::vector<SampledFunction> fs;
    fs.push_back(gen(GeneratorSpec::constant_fn(0.37, 2049)).fn);
    {
        std::vector<double> xs(2049), vals(2049);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = static_cast<double>(i) / 2048.0;
            vals[i] = 0.1 + 0.8 * xs[i];
        }
        fs.emplace_back(std::move(xs), std::move(vals));
    }
    {
        std::vector<double> xs(2049), vals(2049);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            xs[i] = static_cast<double>(i) / 2048.0;
            vals[i] = 0.45 + 0.25 * std::sin(2.0 * std::numbers::pi * xs[i]);
        }
        fs.emplace_back(std::move(xs), std::move(vals));
    }
    {
        SampledFunction w = gen(GeneratorSpec::weierstrass_fn(0.5, 2.0, 8, 4097)).fn;
        for (double& v : w.values) v = 0.5 + 0.12 * v;
        fs.push_back(std::move(w));
    }
    fs.push_back(random_smooth_function(rng, 2049));
    return fs;
}

// Random measures on the graphs of constructed good functions; every one of
// them must clear both probe bounds.
inline GoodFnSuiteReport run_goodfn_suite(std::uint64_t seed, std::size_t trials_per_function = 500,
                                          double epsilon = 0.05,
                                          const GoodFunctionConfig& cfg = {}) {
    Rng rng(seed);
    GoodFnSuiteReport rep;
    const auto bases = goodfn_suite_bases(rng);
    const std::int64_t Ms[] = {2, 4, 8, 16, 32};
    rep.functions = bases.size();
    for (std::size_t fi = 0; fi < bases.size(); ++fi) {
        const GoodFunction g = good_function(bases[fi], Ms[fi % 5], epsilon, cfg);
        const std::size_t n = g.fn.size();
        for (std::size_t t = 0; t < trials_per_function; ++t) {
            std::vector<double> w;
            switch (t % 4) {
                case 0:
                    w = random_weights(rng, n);
                    break;
                case 1: {  // horizontal-only support
                    w.assign(n, 0.0);
                    const auto raw = random_weights(rng, g.horizontal_idx.size());
                    for (std::size_t k = 0; k < raw.size(); ++k) w[g.horizontal_idx[k]] = raw[k];
                    break;
                }
                case 2: {  // vertical-heavy support
                    if (g.vertical_idx.empty()) {
                        w = random_weights(rng, n);
                        break;
                    }
                    w.assign(n, 0.0);
                    const auto raw = random_weights(rng, g.vertical_idx.size());
                    for (std::size_t k = 0; k < raw.size(); ++k) w[g.vertical_idx[k]] = raw[k];
                    break;
                }
                default: {  // half-and-half mixture
                    w.assign(n, 0.0);
                    const auto rh = random_weights(rng, g.horizontal_idx.size());
                    for (std::size_t k = 0; k < rh.size(); ++k)
                        w[g.horizontal_idx[k]] = 0.5 * rh[k];
                    if (!g.vertical_idx.empty()) {
                        const auto rv = random_weights(rng, g.vertical_idx.size());
                        for (std::size_t k = 0; k < rv.size(); ++k)
                            w[g.vertical_idx[k]] += 0.5 * rv[k];
                    } else {
                        for (std::size_t k = 0; k < rh.size(); ++k)
                            w[g.horizontal_idx[k]] += 0.5 * rh[k];
                    }
                    break;
                }
            }
            const AtomicMeasure2D mu =
                graph_pushforward(g.fn, AtomicMeasure1D(g.fn.xs, std::move(w)));
            const GoodBoundReport r = verify_good_bound(g, mu, cfg);
            rep.min_sum_bound = std::min(rep.min_sum_bound, r.sum_bound_value);
            rep.min_max_modulus = std::min(rep.min_max_modulus,
                                           *std::max_element(r.four_moduli, r.four_moduli + 4));
            if (!r.passes) ++rep.failures;
            ++rep.trials;
        }
    }
    return rep;
}

// --- projection identity -------------------------------------------------

struct ProjectionSuiteReport {
    std::size_t trials = 0;
    double max_error = 0.0;  // max |nu_e^(t) - muhat(t e)|
};

inline ProjectionSuiteReport run_projection_suite(std::uint64_t seed, std::size_t trials = 100,
                                                  double t_max = 128.0) {
    Rng rng(seed);
    ProjectionSuiteReport rep;
    rep.trials = trials;
    for (std::size_t k = 0; k < trials; ++k) {
        const std::size_t m = 16 + rng.index(240);
        std::vector<double> xs(m), ys(m);
        for (std::size_t i = 0; i < m; ++i) {
            xs[i] = rng.uniform();
            ys[i] = rng.uniform();
        }
        const AtomicMeasure2D mu(std::move(xs), std::move(ys), random_weights(rng, m));
        const double ang = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double e1 = std::cos(ang), e2 = std::sin(ang);
        const AtomicMeasure1D nu = project_1d(mu, e1, e2);
        const double t = rng.uniform(-t_max, t_max);
        const auto lhs = ft_eval_point(nu, t);
        const auto rhs = ft_eval_point(mu, {t * e1, t * e2});
        rep.max_error = std::max(rep.max_error, std::abs(lhs - rhs));
    }
    return rep;
}

// --- decay-exponent sweep over graph families ----------------------------

struct SweepEntry {
    std::string label;
    DecayEstimate estimate;
};

// Graph measures spanning the generator families; every decay exponent must
// come out <= 1 + slack at desk scale. `full` is the acceptance-scale family
// of 30; otherwise a 6-member smoke set.
inline std::vector<SweepEntry> run_atmost_sweep(std::uint64_t seed, bool full,
                                                unsigned threads = 0) {
    std::vector<std::pair<std::string, SampledFunction>> fams;
    const std::size_t n = full ? 4096 : 2048;

    auto scaled_weier = [&](double a, double b, std::size_t terms) {
        SampledFunction f = gen(GeneratorSpec::weierstrass_fn(a, b, terms, n)).fn;
        double m = 1e-12;
        for (double v : f.values) m = std::max(m, std::abs(v));
        for (double& v : f.values) v = 0.5 + 0.5 * v / m;
        return f;
    };

    if (full) {
        for (double c : {0.0, 0.37, 0.8})
            fams.emplace_back("constant c=" + std::to_string(c),
                              gen(GeneratorSpec::constant_fn(c, n)).fn);
        const std::vector<std::vector<double>> polys = {
            {0.0, 1.0},       {0.0, 0.0, 1.0},          {0.5, 0.3, -0.2},
            {0.0, -1.0, 0.0, 1.0}, {0.2, 1.0, -1.0},    {0.1, 0.5, 0.0, 0.25}};
        for (std::size_t i = 0; i < polys.size(); ++i)
            fams.emplace_back("poly " + std::to_string(i),
                              gen(GeneratorSpec::polynomial_fn(polys[i], n)).fn);
        const double ws[6][2] = {{0.5, 3.0}, {0.5, 2.0}, {0.3, 4.0},
                                 {0.7, 1.5}, {0.4, 3.0}, {0.6, 2.0}};
        for (int i = 0; i < 6; ++i)
            fams.emplace_back("weierstrass " + std::to_string(i),
                              scaled_weier(ws[i][0], ws[i][1], 30));
        int k = 0;
        for (double H : {0.3, 0.5, 0.7})
            for (int s = 0; s < 5; ++s)
                fams.emplace_back("fbm H=" + std::to_string(H) + " seed=" + std::to_string(s),
                                  gen(GeneratorSpec::fbm_fn(H, n, seed + static_cast<std::uint64_t>(100 + k++), true)).fn);
    } else {
        fams.emplace_back("constant", gen(GeneratorSpec::constant_fn(0.37, n)).fn);
        fams.emplace_back("poly x^2", gen(GeneratorSpec::polynomial_fn({0.0, 0.0, 1.0}, n)).fn);
        fams.emplace_back("weierstrass", scaled_weier(0.5, 3.0, 30));
        fams.emplace_back("fbm H=0.3", gen(GeneratorSpec::fbm_fn(0.3, n, seed + 1, true)).fn);
        fams.emplace_back("fbm H=0.5", gen(GeneratorSpec::fbm_fn(0.5, n, seed + 2, true)).fn);
        fams.emplace_back("fbm H=0.7", gen(GeneratorSpec::fbm_fn(0.7, n, seed + 3, true)).fn);
    }

    std::vector<SweepEntry> out;
    for (auto& [label, fn] : fams) {
        const AtomicMeasure2D mu = graph_measure(fn);
        const double r_hi = std::min(256.0, resolution_cutoff(mu));
        out.push_back({label, decay_exponent(mu, 8.0, std::max(r_hi, 32.0), 2, 0.0, threads)});
    }
    return out;
}

}  // namespace muhat
