#pragma once

// Reference implementations used only by the tests. They follow the textbook
// definitions directly and share no code with the library paths they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "cftrack/grid.hpp"

namespace oracle {

using cftrack::Complex;
using cftrack::ComplexPlane;
using cftrack::Plane;

/// X(k) = sum_n x(n) exp(-2 pi i k n / N); inverse carries 1/N.
inline std::vector<Complex> dft(const std::vector<Complex>& x, bool inverse = false) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
            acc += x[j] * std::polar(1.0, angle);
        }
        out[k] = inverse ? acc / static_cast<double>(n) : acc;
    }
    return out;
}

/// Direct double sum over both axes, O(N^4).
inline ComplexPlane dft2(const ComplexPlane& x, bool inverse = false) {
    const std::size_t m = x.rows();
    const std::size_t n = x.cols();
    const double sign = inverse ? 1.0 : -1.0;
    ComplexPlane out(m, n);
    for (std::size_t u = 0; u < m; ++u)
        for (std::size_t v = 0; v < n; ++v) {
            Complex acc = 0.0;
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    const double phase = static_cast<double>((u * r) % m) / static_cast<double>(m) +
                                         static_cast<double>((v * c) % n) / static_cast<double>(n);
                    acc += x(r, c) * std::polar(1.0, sign * 2.0 * std::numbers::pi * phase);
                }
            out(u, v) = inverse ? acc / static_cast<double>(m * n) : acc;
        }
    return out;
}

inline Plane random_plane(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                          double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Plane p(rows, cols);
    for (auto& v : p) v = d(rng);
    return p;
}

inline ComplexPlane random_complex_plane(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    ComplexPlane p(rows, cols);
    for (auto& v : p) v = Complex(d(rng), d(rng));
    return p;
}

/// Felzenszwalb HOG written from the definitions: orientation from atan2
/// rounded to the nearest of 18 directions, tent-weighted cell votes, and
/// block energies read from an edge-padded energy grid.
inline std::vector<Plane> hog(const Plane& img, std::size_t cell) {
    const long H = static_cast<long>(img.rows());
    const long W = static_cast<long>(img.cols());
    const long CY = H / static_cast<long>(cell);
    const long CX = W / static_cast<long>(cell);
    auto px = [&](long y, long x) {
        return img(static_cast<std::size_t>(std::clamp(y, 0L, H - 1)), static_cast<std::size_t>(std::clamp(x, 0L, W - 1)));
    };

    std::vector<std::array<double, 18>> hist(static_cast<std::size_t>(CY * CX));
    for (auto& h : hist) h.fill(0.0);

    for (long y = 0; y < H; ++y)
        for (long x = 0; x < W; ++x) {
            const double gx = px(y, x + 1) - px(y, x - 1);
            const double gy = px(y + 1, x) - px(y - 1, x);
            const double mag = std::hypot(gx, gy);
            if (mag == 0.0) continue;
            double theta = std::atan2(gy, gx);
            if (theta < 0) theta += 2.0 * std::numbers::pi;
            const auto bin = static_cast<std::size_t>(std::lround(theta / (std::numbers::pi / 9.0))) % 18;
            const double cxp = (static_cast<double>(x) + 0.5) / static_cast<double>(cell) - 0.5;
            const double cyp = (static_cast<double>(y) + 0.5) / static_cast<double>(cell) - 0.5;
            for (long i = 0; i < CY; ++i)
                for (long j = 0; j < CX; ++j) {
                    const double wy = std::max(0.0, 1.0 - std::abs(cyp - static_cast<double>(i)));
                    const double wx = std::max(0.0, 1.0 - std::abs(cxp - static_cast<double>(j)));
                    if (wx > 0.0 && wy > 0.0) hist[static_cast<std::size_t>(i * CX + j)][bin] += wx * wy * mag;
                }
        }

    // energy grid padded by one cell on every side with replicated edges
    std::vector<double> energy(static_cast<std::size_t>((CY + 2) * (CX + 2)));
    for (long i = -1; i <= CY; ++i)
        for (long j = -1; j <= CX; ++j) {
            const auto& h = hist[static_cast<std::size_t>(std::clamp(i, 0L, CY - 1) * CX + std::clamp(j, 0L, CX - 1))];
            double e = 0.0;
            for (int o = 0; o < 9; ++o) e += (h[o] + h[o + 9]) * (h[o] + h[o + 9]);
            energy[static_cast<std::size_t>((i + 1) * (CX + 2) + (j + 1))] = e;
        }
    auto E = [&](long i, long j) { return energy[static_cast<std::size_t>((i + 1) * (CX + 2) + (j + 1))]; };

    std::vector<Plane> out(32, Plane(static_cast<std::size_t>(CY), static_cast<std::size_t>(CX)));
    for (long i = 0; i < CY; ++i)
        for (long j = 0; j < CX; ++j) {
            std::array<double, 4> norms{};
            int k = 0;
            // block anchored at the cell first, then up, left, up-left
            for (long bi : {i, i - 1})
                for (long bj : {j, j - 1})
                    norms[static_cast<std::size_t>(k++)] =
                        1.0 / std::sqrt(E(bi, bj) + E(bi, bj + 1) + E(bi + 1, bj) + E(bi + 1, bj + 1) + 1e-4);
            const auto& h = hist[static_cast<std::size_t>(i * CX + j)];
            const auto ui = static_cast<std::size_t>(i);
            const auto uj = static_cast<std::size_t>(j);
            double total = 0.0;
            for (int o = 0; o < 18; ++o) {
                double s = 0.0;
                for (double n : norms) s += std::min(0.2, h[o] * n);
                out[static_cast<std::size_t>(o)](ui, uj) = 0.5 * s;
                total += h[o];
            }
            for (int o = 0; o < 9; ++o) {
                double s = 0.0;
                for (double n : norms) s += std::min(0.2, (h[o] + h[o + 9]) * n);
                out[static_cast<std::size_t>(18 + o)](ui, uj) = 0.5 * s;
            }
            for (std::size_t b = 0; b < 4; ++b) {
                double t = 0.0;
                for (int o = 0; o < 18; ++o) t += std::min(0.2, h[o] * norms[b]);
                out[27 + b](ui, uj) = 0.2357 * t;
            }
            out[31](ui, uj) = total / static_cast<double>(cell * cell);
        }
    return out;
}

}  // namespace oracle
