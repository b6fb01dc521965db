#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "muhat/fft.hpp"
#include "muhat/lemmas.hpp"
#include "muhat/measures.hpp"
#include "muhat/nufft.hpp"
#include "muhat/rng.hpp"

using namespace muhat;

namespace {

// reference DFT, O(n^2)
std::vector<cplx> dft(const std::vector<cplx>& a, bool inverse) {
    const std::size_t n = a.size();
    std::vector<cplx> out(n);
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = sgn * 2.0 * std::numbers::pi * static_cast<double>(j * k) /
                               static_cast<double>(n);
            acc += a[j] * cplx{std::cos(ang), std::sin(ang)};
        }
        out[k] = acc;
    }
    return out;
}

AtomicMeasure2D random_cloud(Rng& rng, std::size_t m, double wx, double wy) {
    std::vector<double> x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = rng.uniform(0.0, wx);
        y[i] = rng.uniform(0.0, wy);
    }
    return AtomicMeasure2D(std::move(x), std::move(y), random_weights(rng, m));
}

}  // namespace

TEST_CASE("fft matches the reference DFT") {
    Rng rng(3);
    for (std::size_t n : {1u, 2u, 8u, 64u, 256u}) {
        std::vector<cplx> a(n);
        for (auto& v : a) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        auto b = a;
        fft_inplace(std::span<cplx>(b), false);
        const auto ref = dft(a, false);
        for (std::size_t k = 0; k < n; ++k) REQUIRE(std::abs(b[k] - ref[k]) < 1e-10 * std::sqrt(n));
        // round trip
        fft_inplace(std::span<cplx>(b), true);
        for (std::size_t k = 0; k < n; ++k)
            REQUIRE(std::abs(b[k] / static_cast<double>(n) - a[k]) < 1e-12);
    }
    REQUIRE_THROWS_AS(fft_inplace(std::span<cplx>(std::vector<cplx>(3).data(), 3), false),
                      std::invalid_argument);
}

TEST_CASE("fft_2d matches row/column reference") {
    Rng rng(5);
    const std::size_t rows = 16, cols = 32;
    std::vector<cplx> a(rows * cols);
    for (auto& v : a) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto b = a;
    fft_2d_inplace(b, rows, cols, false, 2);

    // reference: transform rows then columns with the O(n^2) DFT
    std::vector<cplx> ref = a;
    for (std::size_t r = 0; r < rows; ++r) {
        std::vector<cplx> row(ref.begin() + r * cols, ref.begin() + (r + 1) * cols);
        row = dft(row, false);
        std::copy(row.begin(), row.end(), ref.begin() + r * cols);
    }
    for (std::size_t c = 0; c < cols; ++c) {
        std::vector<cplx> col(rows);
        for (std::size_t r = 0; r < rows; ++r) col[r] = ref[r * cols + c];
        col = dft(col, false);
        for (std::size_t r = 0; r < rows; ++r) ref[r * cols + c] = col[r];
    }
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(std::abs(b[i] - ref[i]) < 1e-9);
}

TEST_CASE("lattice evaluator agrees with the direct sum") {
    Rng rng(11);

    SECTION("generic 2d cloud") {
        const auto mu = random_cloud(rng, 400, 1.0, 0.7);
        // force the lattice path with a large expected-eval hint
        SpectrumEvaluator fast(mu, 96.0, std::size_t{1} << 30, 2);
        REQUIRE(fast.lattice_active());
        SpectrumEvaluator slow(mu, 96.0, 0, 1);
        REQUIRE_FALSE(slow.lattice_active());
        for (int t = 0; t < 400; ++t) {
            const double r = 96.0 * std::sqrt(rng.uniform());
            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const FrequencyPoint xi{r * std::cos(a), r * std::sin(a)};
            REQUIRE(std::abs(fast.eval(xi) - slow.eval(xi)) < 1e-9);
            REQUIRE(std::abs(fast.modulus(xi) - std::abs(slow.eval(xi))) < 1e-9);
        }
    }

    SECTION("degenerate y-extent (constant graph)") {
        std::vector<double> x(512), y(512, 0.37);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) / 511.0;
        const AtomicMeasure2D mu(std::move(x), std::move(y),
                                 std::vector<double>(512, 1.0 / 512.0));
        SpectrumEvaluator fast(mu, 128.0, std::size_t{1} << 30, 2);
        REQUIRE(fast.lattice_active());
        for (int t = 0; t < 200; ++t) {
            const FrequencyPoint xi{rng.uniform(-128.0, 128.0), rng.uniform(-128.0, 128.0)};
            const auto direct = ft_eval_point(mu, xi);
            REQUIRE(std::abs(fast.eval(xi) - direct) < 1e-9);
        }
        // exact unit modulus on the y-axis survives the fast path
        REQUIRE(fast.modulus({0.0, 64.0}) >= 1.0 - 1e-9);
    }

    SECTION("single atom") {
        const AtomicMeasure2D mu({0.3}, {0.7}, {1.0});
        SpectrumEvaluator ev(mu, 64.0, std::size_t{1} << 30, 1);
        for (int t = 0; t < 50; ++t) {
            const FrequencyPoint xi{rng.uniform(-64.0, 64.0), rng.uniform(-64.0, 64.0)};
            REQUIRE(std::abs(ev.modulus(xi) - 1.0) < 1e-9);
        }
    }

    SECTION("frequencies outside the planned cover fall back to the exact sum") {
        const auto mu = random_cloud(rng, 64, 1.0, 1.0);
        SpectrumEvaluator ev(mu, 32.0, std::size_t{1} << 30, 1);
        const FrequencyPoint far{1000.0, -2000.0};
        REQUIRE(std::abs(ev.eval(far) - ft_eval_point(mu, far)) < 1e-14);
    }
}

TEST_CASE("annulus sup is independent of the thread count") {
    Rng rng(19);
    const auto mu = random_cloud(rng, 600, 1.0, 1.0);
    const auto a1 = annulus_sup(mu, 24.0, 6.0, nullptr, 1);
    const auto a2 = annulus_sup(mu, 24.0, 6.0, nullptr, 2);
    const auto a3 = annulus_sup(mu, 24.0, 6.0, nullptr, 7);
    REQUIRE(a1.sup_modulus == a2.sup_modulus);
    REQUIRE(a1.sup_modulus == a3.sup_modulus);
    REQUIRE(a1.argmax.xi1 == a2.argmax.xi1);
    REQUIRE(a1.argmax.xi2 == a3.argmax.xi2);
}
