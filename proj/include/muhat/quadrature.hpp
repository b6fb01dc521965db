#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace muhat {

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(std::size_t n) : nodes(n), weights(n) {
        for (std::size_t i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                                (static_cast<double>(n) + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (std::size_t k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    template <typename F>
    double integrate(const F& f, double a, double b) const {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc += weights[i] * f(mid + half * nodes[i]);
        return acc * half;
    }
};

inline const GaussLegendre& gl64() {
    static const GaussLegendre g(64);
    return g;
}

// tanh-sinh (double-exponential) quadrature on (a, b). Handles integrable
// endpoint singularities like cos(t)^{s-2} near t = pi/2.
template <typename F>
double tanh_sinh(const F& f, double a, double b, double target_rel = 1e-12,
                 int max_level = 12) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const double pi_half = 0.5 * std::numbers::pi;
    const double t_max = 3.8;  // x(t_max) is within ~1e-16 of the endpoint

    auto sample = [&](double t, double& x, double& w) {
        const double sh = std::sinh(t);
        const double ch = std::cosh(t);
        const double th = std::tanh(pi_half * sh);
        x = mid + half * th;
        const double sech = 1.0 / std::cosh(pi_half * sh);
        w = half * pi_half * ch * sech * sech;
    };

    double h = 1.0;
    double x, w;
    sample(0.0, x, w);
    double sum = w * f(x);
    {
        // level 0 coarse pass
        for (double t = h; t <= t_max; t += h) {
            sample(t, x, w);
            if (w > 0.0 && x > a && x < b) sum += w * f(x);
            sample(-t, x, w);
            if (w > 0.0 && x > a && x < b) sum += w * f(x);
        }
    }
    double prev = sum * h;
    for (int level = 1; level <= max_level; ++level) {
        h *= 0.5;
        double add = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h) {
            sample(t, x, w);
            if (w > 0.0 && x > a && x < b) add += w * f(x);
            sample(-t, x, w);
            if (w > 0.0 && x > a && x < b) add += w * f(x);
        }
        const double cur = 0.5 * prev + h * add;
        if (level >= 3 && std::abs(cur - prev) <= target_rel * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace muhat
