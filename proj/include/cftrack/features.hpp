#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "imaging.hpp"

namespace cftrack {

inline constexpr std::size_t kTemplateSide = 32;
inline constexpr std::size_t kCellSize = 4;
inline constexpr std::size_t kHogChannels = 32;
inline constexpr std::size_t kPositionChannels = kHogChannels + 1;

/// d equally sized real planes; channel order is gray (if present) then HOG.
struct FeatureMap {
    std::vector<Plane> planes;
    bool windowed = false;

    std::size_t channels() const noexcept { return planes.size(); }
    std::size_t rows() const noexcept { return planes.empty() ? 0 : planes.front().rows(); }
    std::size_t cols() const noexcept { return planes.empty() ? 0 : planes.front().cols(); }
};

/// Separable Hann taper, zero on the border rows and columns.
struct CosineWindow {
    Plane weights;

    static CosineWindow hann(std::size_t rows = kTemplateSide, std::size_t cols = kTemplateSide) {
        auto taper = [](std::size_t n) {
            std::vector<double> w(n, 1.0);
            if (n < 2) return w;
            for (std::size_t i = 0; i < n; ++i)
                w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1)));
            return w;
        };
        const auto wr = taper(rows);
        const auto wc = taper(cols);
        CosineWindow win{Plane(rows, cols)};
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) win.weights(i, j) = wr[i] * wc[j];
        return win;
    }

    static CosineWindow ones(std::size_t rows = kTemplateSide, std::size_t cols = kTemplateSide) {
        return CosineWindow{Plane(rows, cols, 1.0)};
    }
};

namespace detail {

inline void require_cell_grid(const Plane& patch, std::size_t cell, const char* what) {
    if (cell == 0 || patch.empty() || patch.rows() % cell != 0 || patch.cols() % cell != 0)
        throw std::invalid_argument(std::string(what) + ": cell size " + std::to_string(cell) +
                                    " must divide the patch dimensions");
}

}  // namespace detail

/// cell x cell mean pooling followed by mean removal.
inline Plane gray_channel(const Plane& patch, std::size_t cell = kCellSize) {
    detail::require_cell_grid(patch, cell, "gray_channel");
    const std::size_t rows = patch.rows() / cell;
    const std::size_t cols = patch.cols() / cell;
    Plane out(rows, cols);
    const double inv_area = 1.0 / static_cast<double>(cell * cell);
    for (std::size_t y = 0; y < patch.rows(); ++y) {
        const auto src = patch.row(y);
        for (std::size_t x = 0; x < patch.cols(); ++x) out(y / cell, x / cell) += src[x];
    }
    for (auto& v : out) v *= inv_area;
    const double mean = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
    for (auto& v : out) v -= mean;
    return out;
}

/// Felzenszwalb HOG: 18 signed orientation bins, 9 unsigned bins and 4
/// texture (normalisation energy) channels computed from 2x2-cell block
/// norms with truncation at 0.2, plus the mean gradient magnitude per cell.
///
/// Gradients use centred [-1,0,1] differences with replicated borders. Each
/// pixel votes its magnitude into the nearest of 18 directions (20 degree
/// spacing), split bilinearly over the four nearest cell centres. Block
/// neighbourhoods at the grid border reuse the edge cells.
inline std::vector<Plane> hog32(const Plane& patch, std::size_t cell = kCellSize) {
    detail::require_cell_grid(patch, cell, "hog32");
    constexpr std::size_t kOrient = 9;
    constexpr std::size_t kSigned = 2 * kOrient;
    constexpr double kTruncate = 0.2;
    constexpr double kEps = 1e-4;

    static const auto directions = [] {
        std::array<std::pair<double, double>, kOrient> d{};
        for (std::size_t o = 0; o < kOrient; ++o) {
            const double a = static_cast<double>(o) * std::numbers::pi / static_cast<double>(kOrient);
            d[o] = {std::cos(a), std::sin(a)};
        }
        return d;
    }();

    const std::size_t h = patch.rows();
    const std::size_t w = patch.cols();
    const std::size_t cy = h / cell;
    const std::size_t cx = w / cell;
    const std::size_t ncells = cy * cx;

    std::vector<double> hist(ncells * kSigned, 0.0);
    std::vector<double> magnitude(ncells, 0.0);

    const double inv_cell = 1.0 / static_cast<double>(cell);
    auto vote = [&](long ci, long cj, std::size_t bin, double amount) {
        if (ci < 0 || cj < 0 || ci >= static_cast<long>(cy) || cj >= static_cast<long>(cx)) return;
        const std::size_t c = static_cast<std::size_t>(ci) * cx + static_cast<std::size_t>(cj);
        hist[c * kSigned + bin] += amount;
        magnitude[c] += amount;
    };

    for (std::size_t y = 0; y < h; ++y) {
        const auto up = patch.row(y == 0 ? 0 : y - 1);
        const auto down = patch.row(y + 1 == h ? h - 1 : y + 1);
        const auto mid = patch.row(y);
        const double yp = (static_cast<double>(y) + 0.5) * inv_cell - 0.5;
        const double fy = std::floor(yp);
        const long iy = static_cast<long>(fy);
        const double wy1 = yp - fy;
        const double wy0 = 1.0 - wy1;
        for (std::size_t x = 0; x < w; ++x) {
            const double dx = mid[x + 1 == w ? w - 1 : x + 1] - mid[x == 0 ? 0 : x - 1];
            const double dy = down[x] - up[x];
            const double v = std::sqrt(dx * dx + dy * dy);
            if (v == 0.0) continue;

            double best = 0.0;
            std::size_t best_o = 0;
            for (std::size_t o = 0; o < kOrient; ++o) {
                const double dot = directions[o].first * dx + directions[o].second * dy;
                if (dot > best) {
                    best = dot;
                    best_o = o;
                } else if (-dot > best) {
                    best = -dot;
                    best_o = o + kOrient;
                }
            }

            // bilinear split of the vote over the four nearest cell centres
            const double xp = (static_cast<double>(x) + 0.5) * inv_cell - 0.5;
            const double fx = std::floor(xp);
            const long ix = static_cast<long>(fx);
            const double wx1 = xp - fx;
            const double wx0 = 1.0 - wx1;
            vote(iy, ix, best_o, wy0 * wx0 * v);
            vote(iy, ix + 1, best_o, wy0 * wx1 * v);
            vote(iy + 1, ix, best_o, wy1 * wx0 * v);
            vote(iy + 1, ix + 1, best_o, wy1 * wx1 * v);
        }
    }

    std::vector<double> energy(ncells, 0.0);
    for (std::size_t c = 0; c < ncells; ++c) {
        const double* hc = &hist[c * kSigned];
        for (std::size_t o = 0; o < kOrient; ++o) {
            const double s = hc[o] + hc[o + kOrient];
            energy[c] += s * s;
        }
    }

    auto energy_at = [&](long i, long j) {
        i = std::clamp(i, 0L, static_cast<long>(cy) - 1);
        j = std::clamp(j, 0L, static_cast<long>(cx) - 1);
        return energy[static_cast<std::size_t>(i) * cx + static_cast<std::size_t>(j)];
    };

    std::vector<Plane> out(kHogChannels, Plane(cy, cx));
    const double inv_area = 1.0 / static_cast<double>(cell * cell);
    for (std::size_t i = 0; i < cy; ++i) {
        for (std::size_t j = 0; j < cx; ++j) {
            const auto li = static_cast<long>(i);
            const auto lj = static_cast<long>(j);
            // the four 2x2 blocks containing this cell
            std::array<double, 4> n{};
            std::size_t k = 0;
            for (long bi : {0L, -1L})
                for (long bj : {0L, -1L})
                    n[k++] = 1.0 / std::sqrt(energy_at(li + bi, lj + bj) + energy_at(li + bi, lj + bj + 1) +
                                             energy_at(li + bi + 1, lj + bj) + energy_at(li + bi + 1, lj + bj + 1) +
                                             kEps);

            const std::size_t c = i * cx + j;
            const double* hc = &hist[c * kSigned];
            std::array<double, 4> texture{};

            for (std::size_t o = 0; o < kSigned; ++o) {
                double sum = 0.0;
                for (std::size_t b = 0; b < 4; ++b) {
                    const double t = std::min(hc[o] * n[b], kTruncate);
                    sum += t;
                    texture[b] += t;
                }
                out[o](i, j) = 0.5 * sum;
            }
            for (std::size_t o = 0; o < kOrient; ++o) {
                const double s = hc[o] + hc[o + kOrient];
                double sum = 0.0;
                for (std::size_t b = 0; b < 4; ++b) sum += std::min(s * n[b], kTruncate);
                out[kSigned + o](i, j) = 0.5 * sum;
            }
            for (std::size_t b = 0; b < 4; ++b) out[kSigned + kOrient + b](i, j) = 0.2357 * texture[b];
            out[kHogChannels - 1](i, j) = magnitude[c] * inv_area;
        }
    }
    return out;
}

/// Stacks [gray?, hog...] and applies the window to every plane.
inline FeatureMap assemble(const Plane* gray, const std::vector<Plane>& hog, const CosineWindow& win) {
    FeatureMap fm;
    fm.planes.reserve(hog.size() + (gray ? 1 : 0));
    auto push = [&](const Plane& p) {
        require_same_shape(p, win.weights, "assemble");
        Plane q = p;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] *= win.weights[i];
        fm.planes.push_back(std::move(q));
    };
    if (gray) push(*gray);
    for (const auto& p : hog) push(p);
    fm.windowed = true;
    return fm;
}

inline FeatureMap assemble(const Plane& gray, const std::vector<Plane>& hog, const CosineWindow& win,
                           bool include_gray) {
    return assemble(include_gray ? &gray : nullptr, hog, win);
}

/// Position (gray + HOG) and scale (HOG only) maps computed from one patch.
struct PatchFeatures {
    FeatureMap position;
    FeatureMap scale;
};

inline PatchFeatures extract_features(const Plane& patch, const CosineWindow& win, std::size_t cell = kCellSize) {
    const auto hog = hog32(patch, cell);
    const auto gray = gray_channel(patch, cell);
    return {assemble(&gray, hog, win), assemble(nullptr, hog, win)};
}

inline FeatureMap extract_scale_features(const Plane& patch, const CosineWindow& win, std::size_t cell = kCellSize) {
    return assemble(nullptr, hog32(patch, cell), win);
}

}  // namespace cftrack
