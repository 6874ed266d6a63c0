#pragma once

#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <stdexcept>
#include <utility>
#include <vector>

#include "features.hpp"
#include "filter_bank.hpp"
#include "imaging.hpp"

namespace cftrack {

/// Candidate block sizes a^n P x a^n R for n = -(S-1)/2 .. (S-1)/2, padded by `pad`.
struct ScalePyramid {
    std::vector<double> factors;
    std::vector<std::pair<long, long>> sizes;  // (width, height) in pixels
    double base_w = 0.0;
    double base_h = 0.0;
    double step = 1.0;
    double pad = 1.0;

    std::size_t levels() const noexcept { return factors.size(); }
    std::size_t middle() const noexcept { return factors.size() / 2; }
};

struct ScaleResult {
    std::size_t index = 0;
    double factor = 1.0;
    double peak = 0.0;
    Peak displacement;
    std::vector<double> level_peaks;
};

inline ScalePyramid pyramid(double P, double R, double a, int S, double pad) {
    if (!(P > 0.0) || !(R > 0.0) || !std::isfinite(P) || !std::isfinite(R))
        throw std::invalid_argument("pyramid: target size must be positive");
    if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("pyramid: scale step must be > 1");
    if (S < 1 || S % 2 == 0) throw std::invalid_argument("pyramid: number of scales must be odd and >= 1");
    if (!(pad >= 1.0)) throw std::invalid_argument("pyramid: pad must be >= 1");

    ScalePyramid pyr;
    pyr.base_w = P;
    pyr.base_h = R;
    pyr.step = a;
    pyr.pad = pad;
    const int half = (S - 1) / 2;
    for (int n = -half; n <= half; ++n) {
        const double f = std::pow(a, n);
        pyr.factors.push_back(f);
        pyr.sizes.emplace_back(extent_pixels(f * pad * P), extent_pixels(f * pad * R));
    }
    return pyr;
}

/// Evaluates the HOG-only scale filter on every pyramid level centred at
/// `center` and returns the level with the highest response peak. Ties go to
/// the level nearest factor 1, then to the lower index.
inline ScaleResult best_scale(const GrayFrame& frame, double center_y, double center_x, const BoundingBox& box,
                              const FilterModel& scale_model, const ScalePyramid& pyr, const CosineWindow& win,
                              std::size_t patch_side = kPatchSide, std::size_t cell = kCellSize) {
    if (scale_model.channels() != kHogChannels)
        throw std::invalid_argument("best_scale: scale model must have 32 channels");
    if (pyr.levels() == 0) throw std::invalid_argument("best_scale: empty pyramid");

    const BoundingBox centred{center_x, center_y, box.w, box.h};
    const std::size_t mid = pyr.middle();
    auto distance = [mid](std::size_t i) { return i > mid ? i - mid : mid - i; };

    ScaleResult best;
    best.level_peaks.reserve(pyr.levels());
    for (std::size_t i = 0; i < pyr.levels(); ++i) {
        const GrayFrame patch = sample_patch(frame, centred, pyr.factors[i], pyr.pad, patch_side);
        const Peak p = peak_locate(respond(scale_model, extract_scale_features(patch, win, cell)));
        best.level_peaks.push_back(p.value);

        const bool better = i == 0 || p.value > best.peak ||
                            (p.value == best.peak && distance(i) < distance(best.index));
        if (better) {
            best.index = i;
            best.factor = pyr.factors[i];
            best.peak = p.value;
            best.displacement = p;
        }
    }
    return best;
}

}  // namespace cftrack
