#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "grid.hpp"

namespace cftrack {

/// Single-channel image, rows = height, cols = width, intensities in [0,1].
using GrayFrame = Plane;

inline constexpr std::size_t kPatchSide = 128;

/// Axis-aligned box in continuous pixel coordinates; pixel j covers [j, j+1).
struct BoundingBox {
    double cx = 0.0;
    double cy = 0.0;
    double w = 1.0;
    double h = 1.0;

    double left() const noexcept { return cx - w / 2.0; }
    double top() const noexcept { return cy - h / 2.0; }
    bool finite() const noexcept {
        return std::isfinite(cx) && std::isfinite(cy) && std::isfinite(w) && std::isfinite(h);
    }
    bool valid() const noexcept { return finite() && w > 0.0 && h > 0.0; }

    friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Throws unless the frame is non-empty and every intensity is finite and in [0,1].
inline void validate_frame(const GrayFrame& frame) {
    if (frame.empty()) throw std::invalid_argument("frame is empty");
    for (double v : frame)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw std::invalid_argument("frame intensity outside [0,1]");
}

inline double to_gray(double r, double g, double b) noexcept {
    return std::clamp(0.299 * r + 0.587 * g + 0.114 * b, 0.0, 1.0);
}

inline long extent_pixels(double size) noexcept {
    return std::max(1L, std::lround(size));
}

/// Crops round(scale*pad*w) x round(scale*pad*h) pixels centred on the box.
/// Out-of-frame pixels replicate the nearest edge pixel.
inline GrayFrame extract_block(const GrayFrame& frame, const BoundingBox& box, double scale, double pad) {
    if (!box.finite() || !std::isfinite(scale) || !std::isfinite(pad))
        throw std::invalid_argument("extract_block: non-finite box or scale");
    if (!box.valid() || scale <= 0.0 || pad < 1.0)
        throw std::invalid_argument("extract_block: box must have w,h > 0, scale > 0, pad >= 1");
    if (frame.empty()) throw std::invalid_argument("extract_block: empty frame");

    const long out_w = extent_pixels(scale * pad * box.w);
    const long out_h = extent_pixels(scale * pad * box.h);
    const long x0 = static_cast<long>(std::floor(box.cx - out_w / 2.0 + 0.5));
    const long y0 = static_cast<long>(std::floor(box.cy - out_h / 2.0 + 0.5));
    const long max_x = static_cast<long>(frame.cols()) - 1;
    const long max_y = static_cast<long>(frame.rows()) - 1;

    GrayFrame out(static_cast<std::size_t>(out_h), static_cast<std::size_t>(out_w));
    for (long r = 0; r < out_h; ++r) {
        const auto sy = static_cast<std::size_t>(std::clamp(y0 + r, 0L, max_y));
        const auto src = frame.row(sy);
        auto dst = out.row(static_cast<std::size_t>(r));
        for (long c = 0; c < out_w; ++c)
            dst[static_cast<std::size_t>(c)] = src[static_cast<std::size_t>(std::clamp(x0 + c, 0L, max_x))];
    }
    return out;
}

namespace detail {

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double frac;
};

// Pixel-centre aligned sample positions, clamped to the source edge.
inline std::vector<Tap> bilinear_taps(std::size_t src, std::size_t dst) {
    std::vector<Tap> taps(dst);
    const double ratio = static_cast<double>(src) / static_cast<double>(dst);
    const double last = static_cast<double>(src - 1);
    for (std::size_t i = 0; i < dst; ++i) {
        const double s = std::clamp((static_cast<double>(i) + 0.5) * ratio - 0.5, 0.0, last);
        const auto lo = static_cast<std::size_t>(s);
        taps[i] = {lo, std::min(lo + 1, src - 1), s - static_cast<double>(lo)};
    }
    return taps;
}

}  // namespace detail

inline GrayFrame resize_bilinear(const GrayFrame& block, std::size_t out_w, std::size_t out_h) {
    if (block.empty()) throw std::invalid_argument("resize_bilinear: empty block");
    if (out_w == 0 || out_h == 0) throw std::invalid_argument("resize_bilinear: output size must be >= 1");

    const auto xs = detail::bilinear_taps(block.cols(), out_w);
    const auto ys = detail::bilinear_taps(block.rows(), out_h);
    GrayFrame out(out_h, out_w);
    for (std::size_t r = 0; r < out_h; ++r) {
        const auto top = block.row(ys[r].lo);
        const auto bot = block.row(ys[r].hi);
        const double fy = ys[r].frac;
        auto dst = out.row(r);
        for (std::size_t c = 0; c < out_w; ++c) {
            const auto& t = xs[c];
            // std::lerp stays within [a, b] for t in [0, 1]
            const double upper = std::lerp(top[t.lo], top[t.hi], t.frac);
            const double lower = std::lerp(bot[t.lo], bot[t.hi], t.frac);
            dst[c] = std::lerp(upper, lower, fy);
        }
    }
    return out;
}

/// Samples the padded block around `box` at `scale` directly onto a side x side
/// patch. Equivalent to extract_block followed by resize_bilinear, except the
/// block extent (scale*pad*w by scale*pad*h) and its placement are not rounded
/// to whole pixels. Out-of-frame samples replicate the nearest edge pixel.
inline GrayFrame sample_patch(const GrayFrame& frame, const BoundingBox& box, double scale, double pad,
                              std::size_t side = kPatchSide) {
    if (!box.finite() || !std::isfinite(scale) || !std::isfinite(pad))
        throw std::invalid_argument("sample_patch: non-finite box or scale");
    if (!box.valid() || scale <= 0.0 || pad < 1.0)
        throw std::invalid_argument("sample_patch: box must have w,h > 0, scale > 0, pad >= 1");
    if (frame.empty()) throw std::invalid_argument("sample_patch: empty frame");
    if (side == 0) throw std::invalid_argument("sample_patch: side must be >= 1");

    auto taps = [side](double centre, double extent, std::size_t src) {
        std::vector<detail::Tap> t(side);
        const double step = extent / static_cast<double>(side);
        const double first = centre - extent / 2.0 - 0.5;
        const double last = static_cast<double>(src - 1);
        for (std::size_t i = 0; i < side; ++i) {
            const double s = std::clamp(first + (static_cast<double>(i) + 0.5) * step, 0.0, last);
            const auto lo = static_cast<std::size_t>(s);
            t[i] = {lo, std::min(lo + 1, src - 1), s - static_cast<double>(lo)};
        }
        return t;
    };
    const auto xs = taps(box.cx, scale * pad * box.w, frame.cols());
    const auto ys = taps(box.cy, scale * pad * box.h, frame.rows());

    GrayFrame out(side, side);
    for (std::size_t r = 0; r < side; ++r) {
        const auto top = frame.row(ys[r].lo);
        const auto bot = frame.row(ys[r].hi);
        auto dst = out.row(r);
        for (std::size_t c = 0; c < side; ++c) {
            const auto& t = xs[c];
            dst[c] = std::lerp(std::lerp(top[t.lo], top[t.hi], t.frac), std::lerp(bot[t.lo], bot[t.hi], t.frac),
                               ys[r].frac);
        }
    }
    return out;
}

}  // namespace cftrack
