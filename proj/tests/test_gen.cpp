#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "muhat/gen.hpp"
#include "muhat/rng.hpp"

using namespace muhat;

TEST_CASE("constant and polynomial generators") {
    const auto c = gen(GeneratorSpec::constant_fn(0.3, 16)).fn;
    REQUIRE(c.size() == 16);
    for (double v : c.values) REQUIRE(v == 0.3);
    REQUIRE(c.xs.front() == 0.0);
    REQUIRE(c.xs.back() == 1.0);

    const auto p = gen(GeneratorSpec::polynomial_fn({1.0, -2.0, 1.0}, 5)).fn;  // (1-x)^2
    REQUIRE(p.values[0] == 1.0);
    REQUIRE(p.values[4] == 0.0);
    REQUIRE(p.values[2] == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("weierstrass generator") {
    SECTION("sup bound from the geometric series") {
        const auto f = gen(GeneratorSpec::weierstrass_fn(0.5, 3.0, 30, 4096)).fn;
        for (double v : f.values) REQUIRE(std::abs(v) <= 2.0);
        REQUIRE(f.oscillation() > 0.5);  // genuinely rough, not a constant
    }

    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(gen(GeneratorSpec::weierstrass_fn(1.5, 3.0, 10, 64)), std::domain_error);
        REQUIRE_THROWS_AS(gen(GeneratorSpec::weierstrass_fn(0.5, 0.9, 10, 64)), std::domain_error);
        REQUIRE_THROWS_AS(gen(GeneratorSpec::weierstrass_fn(0.2, 3.0, 10, 64)),
                          std::domain_error);  // a b < 1
    }
}

TEST_CASE("fbm generator") {
    SECTION("deterministic in the seed") {
        const auto a = gen(GeneratorSpec::fbm_fn(0.5, 1024, 42)).fn;
        const auto b = gen(GeneratorSpec::fbm_fn(0.5, 1024, 42)).fn;
        const auto c = gen(GeneratorSpec::fbm_fn(0.5, 1024, 43)).fn;
        REQUIRE(a.values == b.values);
        REQUIRE(a.values != c.values);
        REQUIRE(a.values[0] == 0.0);
    }

    SECTION("Brownian case: Var B(1) and Cov(B(1/2), B(1)) match the covariance") {
        const int seeds = 200;
        double m1 = 0, m2 = 0, v11 = 0, v22 = 0, c12 = 0;
        for (int s = 0; s < seeds; ++s) {
            const auto f = gen(GeneratorSpec::fbm_fn(0.5, 1024, 5000 + s)).fn;
            const double bh = f.values[f.size() / 2];  // B(x) at x ~ 0.5
            const double b1 = f.values.back();
            m1 += bh;
            m2 += b1;
            v11 += bh * bh;
            v22 += b1 * b1;
            c12 += bh * b1;
        }
        m1 /= seeds;
        m2 /= seeds;
        const double var1 = v22 / seeds - m2 * m2;
        const double cov = c12 / seeds - m1 * m2;
        REQUIRE(var1 > 0.8);
        REQUIRE(var1 < 1.2);
        REQUIRE(cov > 0.4);
        REQUIRE(cov < 0.6);
    }

    SECTION("fractional cases: increment variance follows h^{2H}") {
        for (double H : {0.3, 0.7}) {
            const int seeds = 100;
            const std::size_t n = 2048;
            const double h = 1.0 / static_cast<double>(n - 1);
            double acc = 0.0;
            std::size_t count = 0;
            for (int s = 0; s < seeds; ++s) {
                const auto f = gen(GeneratorSpec::fbm_fn(H, n, 9000 + s)).fn;
                for (std::size_t i = 1; i < f.size(); i += 64) {
                    const double d = f.values[i] - f.values[i - 1];
                    acc += d * d;
                    ++count;
                }
            }
            const double ratio = (acc / static_cast<double>(count)) / std::pow(h, 2.0 * H);
            REQUIRE(ratio > 0.85);
            REQUIRE(ratio < 1.15);
        }
    }

    SECTION("self-similarity across resolutions: Var B(1) is resolution-free") {
        for (std::size_t n : {256u, 4096u}) {
            const int seeds = 150;
            double acc = 0.0;
            for (int s = 0; s < seeds; ++s) {
                const auto f = gen(GeneratorSpec::fbm_fn(0.7, n, 777 + s)).fn;
                acc += f.values.back() * f.values.back();
            }
            const double var = acc / seeds;
            REQUIRE(var > 0.75);
            REQUIRE(var < 1.3);
        }
    }

    SECTION("normalization maps to [0,1]") {
        const auto f = gen(GeneratorSpec::fbm_fn(0.5, 512, 11, true)).fn;
        const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
        REQUIRE(*lo == 0.0);
        REQUIRE(*hi == 1.0);
    }

    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(gen(GeneratorSpec::fbm_fn(0.0, 1024, 1)), std::domain_error);
        REQUIRE_THROWS_AS(gen(GeneratorSpec::fbm_fn(1.0, 1024, 1)), std::domain_error);
        REQUIRE_THROWS_AS(gen(GeneratorSpec::fbm_fn(0.5, 1000, 1)), std::domain_error);
    }
}

TEST_CASE("fbm covariance factorization fallback agrees statistically") {
    // The circulant embedding never fails for these covariances, so exercise
    // the Cholesky path directly and check the same moments.
    const std::size_t n = 129;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i) / (n - 1);
    const int seeds = 300;
    double acc = 0.0;
    for (int s = 0; s < seeds; ++s) {
        Rng rng(3000 + s);
        std::vector<double> path;
        detail::fbm_cholesky(xs, 0.5, rng, path);
        REQUIRE(path.size() == n);
        REQUIRE(path[0] == 0.0);
        acc += path.back() * path.back();
    }
    const double var = acc / seeds;
    REQUIRE(var > 0.8);
    REQUIRE(var < 1.2);
}
