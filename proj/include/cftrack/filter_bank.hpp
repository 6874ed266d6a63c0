#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "batch_schedule.hpp"
#include "features.hpp"
#include "grid.hpp"
#include "spectral.hpp"

namespace cftrack {

/// Multi-channel correlation filter H^l = A^l / (B + lambda) kept as separate
/// per-channel numerators and one shared real denominator.
struct FilterModel {
    std::vector<Spectrum> numerators;
    Plane denominator;
    double lambda = 0.01;

    std::size_t channels() const noexcept { return numerators.size(); }
};

using ResponseMap = Plane;

struct Peak {
    long dy = 0;
    long dx = 0;
    double value = 0.0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

namespace detail {

inline std::vector<Spectrum> channel_spectra(const FeatureMap& f) {
    std::vector<Spectrum> out;
    out.reserve(f.channels());
    for (const auto& p : f.planes) out.push_back(fft2d(p));
    return out;
}

// Numerators conj(G)*F^l and the energy sum |F^k|^2 for one sample.
inline FilterModel sample_model(const FeatureMap& f, const GaussianLabel& label, double lambda) {
    if (f.channels() == 0) throw std::invalid_argument("train_init: feature map has no channels");
    for (const auto& p : f.planes) require_same_shape(p, label.plane, "train_init");

    FilterModel m;
    m.lambda = lambda;
    m.denominator = Plane(label.plane.rows(), label.plane.cols(), 0.0);
    m.numerators.reserve(f.channels());
    for (auto& spec : channel_spectra(f)) {
        for (std::size_t i = 0; i < spec.size(); ++i) m.denominator[i] += std::norm(spec[i]);
        m.numerators.push_back(pointwise(label.spectrum, spec, PointwiseOp::conj_mul));
    }
    return m;
}

inline void require_channels(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": channel mismatch (" + std::to_string(got) + " vs " +
                                    std::to_string(want) + ")");
}

}  // namespace detail

inline FilterModel train_init(const FeatureMap& f, const GaussianLabel& label, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("train_init: lambda must be >= 0");
    return detail::sample_model(f, label, lambda);
}

/// A_t = (1-eta) A_{t-1} + eta conj(G) F_t and B_t = (1-eta) B_{t-1} + eta sum |F_t|^2.
inline FilterModel update(const FilterModel& model, const FeatureMap& f_t, const GaussianLabel& label, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("update: eta must lie in [0,1]");
    detail::require_channels(f_t.channels(), model.channels(), "update");
    if (eta == 0.0) return model;

    FilterModel fresh = detail::sample_model(f_t, label, model.lambda);
    if (eta == 1.0) return fresh;

    const double keep = 1.0 - eta;
    for (std::size_t l = 0; l < fresh.channels(); ++l) {
        auto& a = fresh.numerators[l];
        const auto& prev = model.numerators[l];
        require_same_shape(a, prev, "update");
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = keep * prev[i] + eta * a[i];
    }
    for (std::size_t i = 0; i < fresh.denominator.size(); ++i)
        fresh.denominator[i] = keep * model.denominator[i] + eta * fresh.denominator[i];
    return fresh;
}

namespace detail {

inline ResponseMap finish_response(const Spectrum& numerator, const FilterModel& model) {
    Spectrum quotient(numerator.rows(), numerator.cols());
    for (std::size_t i = 0; i < numerator.size(); ++i)
        quotient[i] = numerator[i] / (model.denominator[i] + model.lambda);
    return real_part(ifft2d(quotient));
}

inline void accumulate_channel(Spectrum& acc, const FilterModel& model, const FeatureMap& z, std::size_t l) {
    const Spectrum zs = fft2d(z.planes[l]);
    const auto& a = model.numerators[l];
    require_same_shape(zs, a, "respond");
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += std::conj(a[i]) * zs[i];
}

}  // namespace detail

/// y = IFFT( sum_l conj(A^l) Z^l / (B + lambda) ), real part.
inline ResponseMap respond(const FilterModel& model, const FeatureMap& z) {
    detail::require_channels(z.channels(), model.channels(), "respond");
    if (model.channels() == 0) throw std::invalid_argument("respond: model has no channels");
    Spectrum acc(model.denominator.rows(), model.denominator.cols());
    for (std::size_t l = 0; l < model.channels(); ++l) detail::accumulate_channel(acc, model, z, l);
    return detail::finish_response(acc, model);
}

/// Same response as respond(), with the numerator summed per batch (channels
/// ascending inside a batch) and the batch partial sums combined in schedule order.
inline ResponseMap respond_batched(const FilterModel& model, const FeatureMap& z, const BatchSchedule& schedule) {
    detail::require_channels(z.channels(), model.channels(), "respond_batched");
    validate_partition(schedule, model.channels());
    if (model.channels() == 0) throw std::invalid_argument("respond_batched: model has no channels");

    const std::size_t rows = model.denominator.rows();
    const std::size_t cols = model.denominator.cols();
    Spectrum total;
    bool first = true;
    for (const auto& batch : schedule.batches) {
        if (batch.empty()) continue;
        auto order = batch;
        std::sort(order.begin(), order.end());
        Spectrum partial(rows, cols);
        for (std::size_t l : order) detail::accumulate_channel(partial, model, z, l);
        if (first) {
            total = std::move(partial);
            first = false;
        } else {
            for (std::size_t i = 0; i < total.size(); ++i) total[i] += partial[i];
        }
    }
    return detail::finish_response(total, model);
}

/// Integer argmax; indices past the half-size wrap to negative displacements.
inline Peak peak_locate(const ResponseMap& y) {
    if (y.empty()) throw std::invalid_argument("peak_locate: empty response");
    std::size_t best = 0;
    for (std::size_t i = 1; i < y.size(); ++i)
        if (y[i] > y[best]) best = i;
    const auto rows = static_cast<long>(y.rows());
    const auto cols = static_cast<long>(y.cols());
    long r = static_cast<long>(best / y.cols());
    long c = static_cast<long>(best % y.cols());
    if (r > rows / 2) r -= rows;
    if (c > cols / 2) c -= cols;
    return {r, c, y[best]};
}

}  // namespace cftrack
