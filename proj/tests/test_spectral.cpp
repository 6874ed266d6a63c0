#include <gtest/gtest.h>

#include <random>

#include "cftrack/spectral.hpp"
#include "oracles.hpp"

using namespace cftrack;

TEST(Spectral, OneDimensionalMatchesDirectDft) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    for (std::size_t n : {1u, 2u, 4u, 8u, 32u, 128u}) {
        std::vector<Complex> x(n);
        for (auto& v : x) v = {d(rng), d(rng)};
        const auto want = oracle::dft(x);
        const auto got = dft1d(x);
        const auto back = dft1d(got, true);
        for (std::size_t k = 0; k < n; ++k) {
            EXPECT_LT(std::abs(got[k] - want[k]), 1e-10) << n << ":" << k;
            EXPECT_LT(std::abs(back[k] - x[k]), 1e-12);
        }
    }
}

TEST(Spectral, KnownTransforms) {
    // impulse -> all ones; constant -> impulse of height N
    std::vector<Complex> impulse(8, 0.0);
    impulse[0] = 1.0;
    for (const auto& v : dft1d(impulse)) EXPECT_EQ(v, Complex(1.0, 0.0));
    const auto c = dft1d(std::vector<Complex>(8, 1.0));
    EXPECT_NEAR(c[0].real(), 8.0, 1e-15);
    for (std::size_t k = 1; k < 8; ++k) EXPECT_LT(std::abs(c[k]), 1e-14);
    // x = [0,1,0,0] -> exp(-2 pi i k / 4) = 1, -i, -1, i
    const auto s = dft1d({0.0, 1.0, 0.0, 0.0});
    const std::vector<Complex> want{{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LT(std::abs(s[k] - want[k]), 1e-15);
}

TEST(Spectral, RejectsNonPowerOfTwo) {
    EXPECT_THROW(dft1d(std::vector<Complex>(6)), std::invalid_argument);
    EXPECT_THROW(fft2d(Plane(3, 4)), std::invalid_argument);
    EXPECT_THROW(dft1d(std::vector<Complex>{}), std::invalid_argument);
}

TEST(Spectral, TwoDimensionalMatchesDirectDft) {
    std::mt19937_64 rng(2);
    for (auto [r, c] : {std::pair{4u, 8u}, std::pair{8u, 8u}, std::pair{16u, 4u}, std::pair{1u, 16u}}) {
        const auto x = oracle::random_complex_plane(rng, r, c);
        EXPECT_LT(max_abs_diff(fft2d(x), oracle::dft2(x)), 1e-10);
        EXPECT_LT(max_abs_diff(fft2d(x, true), oracle::dft2(x, true)), 1e-12);
    }
}

TEST(Spectral, RoundTrip) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const Plane p = oracle::random_plane(rng, 32, 32);
        EXPECT_LT(max_abs_diff(real_part(ifft2d(fft2d(p))), p), 1e-10);
    }
}

TEST(Spectral, Parseval) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 50; ++t) {
        const Plane p = oracle::random_plane(rng, 16, 32);
        const Spectrum P = fft2d(p);
        double time = 0.0, freq = 0.0;
        for (double v : p) time += v * v;
        for (const auto& v : P) freq += std::norm(v);
        freq /= static_cast<double>(p.size());
        EXPECT_NEAR(freq, time, 1e-9 * time);
    }
}

TEST(Spectral, Linearity) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 20; ++t) {
        const Plane p = oracle::random_plane(rng, 32, 32);
        const Plane q = oracle::random_plane(rng, 32, 32);
        const double a = 0.7, b = -2.3;
        Plane mix(32, 32);
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * p[i] + b * q[i];
        const Spectrum P = fft2d(p), Q = fft2d(q);
        Spectrum want(32, 32);
        for (std::size_t i = 0; i < want.size(); ++i) want[i] = a * P[i] + b * Q[i];
        EXPECT_LT(max_abs_diff(fft2d(mix), want), 1e-10);
    }
}

TEST(Spectral, RealInputIsHermitian) {
    std::mt19937_64 rng(6);
    const Spectrum V = fft2d(oracle::random_plane(rng, 32, 32));
    for (std::size_t i = 0; i < 32; ++i)
        for (std::size_t j = 0; j < 32; ++j)
            EXPECT_LT(std::abs(V(i, j) - std::conj(V((32 - i) % 32, (32 - j) % 32))), 1e-9);
}

TEST(Spectral, ShiftTheorem) {
    // a circular shift by (dr, dc) multiplies the spectrum by exp(-2 pi i (u dr / M + v dc / N))
    std::mt19937_64 rng(7);
    const Plane p = oracle::random_plane(rng, 8, 16);
    const Spectrum P = fft2d(p);
    const Spectrum S = fft2d(circshift(p, 3, -5));
    for (std::size_t u = 0; u < 8; ++u)
        for (std::size_t v = 0; v < 16; ++v) {
            const double phase = -2.0 * std::numbers::pi * (3.0 * u / 8.0 + (-5.0) * v / 16.0);
            EXPECT_LT(std::abs(S(u, v) - P(u, v) * std::polar(1.0, phase)), 1e-10);
        }
}

TEST(Spectral, Pointwise) {
    const Spectrum a(1, 2, std::vector<Complex>{{1, 2}, {3, -1}});
    const Spectrum b(1, 2, std::vector<Complex>{{0, 1}, {2, 2}});
    const auto m = pointwise(a, b, PointwiseOp::mul);
    const auto cm = pointwise(a, b, PointwiseOp::conj_mul);
    const auto s = pointwise(a, b, PointwiseOp::add);
    EXPECT_EQ(m[0], Complex(-2, 1));
    EXPECT_EQ(m[1], Complex(8, 4));
    EXPECT_EQ(cm[0], Complex(2, 1));
    EXPECT_EQ(cm[1], Complex(4, 8));
    EXPECT_EQ(s[1], Complex(5, 1));
    EXPECT_THROW(pointwise(a, Spectrum(2, 1), PointwiseOp::add), std::invalid_argument);
}

TEST(Spectral, GaussianLabel) {
    const auto g = gaussian_label(32, 32, 2.0);
    EXPECT_EQ(g.plane(0, 0), 1.0);
    EXPECT_NEAR(g.plane(0, 1), 0.88249690258459540286, 1e-15);
    EXPECT_EQ(g.plane(0, 1), g.plane(0, 31));
    EXPECT_EQ(g.plane(3, 5), g.plane(29, 27));
    for (double v : g.plane) {
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, 1.0);
    }
    EXPECT_EQ(g.spectrum, fft2d(g.plane));
    EXPECT_THROW(gaussian_label(32, 32, 0.0), std::invalid_argument);
}
