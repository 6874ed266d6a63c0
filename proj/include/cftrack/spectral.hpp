#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"

namespace cftrack {

using Spectrum = ComplexPlane;

namespace detail {

// Bit-reversal permutation and twiddles for one power-of-two length.
struct FftPlan {
    std::size_t n = 0;
    std::vector<std::size_t> reversed;
    std::vector<Complex> twiddles;  // exp(-2*pi*i*k/n), k < n/2

    explicit FftPlan(std::size_t len) : n(len), reversed(len), twiddles(len / 2) {
        const int bits = std::countr_zero(len);
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t r = 0;
            for (int b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
            reversed[i] = r;
        }
        for (std::size_t k = 0; k < len / 2; ++k)
            twiddles[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len));
    }
};

inline constexpr int kMaxFftLog2 = 16;

inline const FftPlan& fft_plan(std::size_t n) {
    static const auto plans = [] {
        std::vector<FftPlan> p;
        p.reserve(kMaxFftLog2 + 1);
        for (int b = 0; b <= kMaxFftLog2; ++b) p.emplace_back(std::size_t{1} << b);
        return p;
    }();
    return plans[static_cast<std::size_t>(std::countr_zero(n))];
}

inline void require_fft_length(std::size_t n) {
    if (n < 1 || !std::has_single_bit(n) || std::countr_zero(n) > kMaxFftLog2)
        throw std::invalid_argument("dft1d: length " + std::to_string(n) + " is not a supported power of two");
}

}  // namespace detail

/// In-place radix-2 transform. Forward is un-normalised; inverse scales by 1/N.
inline void dft1d_inplace(std::span<Complex> x, bool inverse) {
    const std::size_t n = x.size();
    detail::require_fft_length(n);
    const auto& plan = detail::fft_plan(n);

    for (std::size_t i = 0; i < n; ++i)
        if (i < plan.reversed[i]) std::swap(x[i], x[plan.reversed[i]]);

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                Complex w = plan.twiddles[k * stride];
                if (inverse) w = std::conj(w);
                const Complex t = w * x[start + k + half];
                x[start + k + half] = x[start + k] - t;
                x[start + k] += t;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : x) v *= scale;
    }
}

inline std::vector<Complex> dft1d(std::vector<Complex> x, bool inverse = false) {
    dft1d_inplace(x, inverse);
    return x;
}

/// 2-D transform as two passes of 1-D transforms: every row first, the
/// intermediate result is stored transposed, then every column.
inline Spectrum fft2d(const Spectrum& in, bool inverse = false) {
    const std::size_t rows = in.rows();
    const std::size_t cols = in.cols();
    detail::require_fft_length(rows);
    detail::require_fft_length(cols);

    Spectrum row_pass = in;
    for (std::size_t r = 0; r < rows; ++r) dft1d_inplace(row_pass.row(r), inverse);

    Spectrum transposed(cols, rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) transposed(c, r) = row_pass(r, c);

    for (std::size_t c = 0; c < cols; ++c) dft1d_inplace(transposed.row(c), inverse);

    Spectrum out(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) out(r, c) = transposed(c, r);
    return out;
}

inline Spectrum to_complex(const Plane& p) {
    Spectrum s(p.rows(), p.cols());
    for (std::size_t i = 0; i < p.size(); ++i) s[i] = Complex(p[i], 0.0);
    return s;
}

inline Plane real_part(const Spectrum& s) {
    Plane p(s.rows(), s.cols());
    for (std::size_t i = 0; i < s.size(); ++i) p[i] = s[i].real();
    return p;
}

inline Spectrum fft2d(const Plane& in) { return fft2d(to_complex(in), false); }

inline Spectrum ifft2d(const Spectrum& in) { return fft2d(in, true); }

enum class PointwiseOp { mul, conj_mul, add };

/// Elementwise a*b, conj(a)*b or a+b.
inline Spectrum pointwise(const Spectrum& a, const Spectrum& b, PointwiseOp op) {
    require_same_shape(a, b, "pointwise");
    Spectrum out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.size(); ++i) {
        switch (op) {
            case PointwiseOp::mul: out[i] = a[i] * b[i]; break;
            case PointwiseOp::conj_mul: out[i] = std::conj(a[i]) * b[i]; break;
            case PointwiseOp::add: out[i] = a[i] + b[i]; break;
        }
    }
    return out;
}

struct GaussianLabel {
    double sigma = 0.0;
    Plane plane;
    Spectrum spectrum;
};

/// Gaussian with its peak at cell (0,0), using circular distances.
inline GaussianLabel gaussian_label(std::size_t rows, std::size_t cols, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_label: sigma must be > 0");
    GaussianLabel label{sigma, Plane(rows, cols), {}};
    const double denom = 2.0 * sigma * sigma;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto di = static_cast<double>(std::min(i, rows - i));
        for (std::size_t j = 0; j < cols; ++j) {
            const auto dj = static_cast<double>(std::min(j, cols - j));
            label.plane(i, j) = std::exp(-(di * di + dj * dj) / denom);
        }
    }
    label.spectrum = fft2d(label.plane);
    return label;
}

}  // namespace cftrack
