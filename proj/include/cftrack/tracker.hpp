#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>

#include "features.hpp"
#include "filter_bank.hpp"
#include "imaging.hpp"
#include "scale_search.hpp"
#include "spectral.hpp"

namespace cftrack {

struct TrackerParams {
    double lambda = 0.01;
    double eta = 0.025;
    double sigma = 2.0;
    int scales = 7;
    double scale_step = 1.005;
    double pad = 2.0;
    std::size_t patch_side = kPatchSide;
    std::size_t template_side = kTemplateSide;
    std::size_t cell = kCellSize;
    double min_size = 8.0;

    void validate() const {
        if (!(lambda > 0.0)) throw std::invalid_argument("params: lambda must be > 0");
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("params: eta must lie in [0,1]");
        if (!(sigma > 0.0)) throw std::invalid_argument("params: sigma must be > 0");
        if (scales < 1 || scales % 2 == 0) throw std::invalid_argument("params: scales must be odd");
        if (!(scale_step > 1.0)) throw std::invalid_argument("params: scale_step must be > 1");
        if (!(pad >= 1.0)) throw std::invalid_argument("params: pad must be >= 1");
        if (cell == 0 || patch_side != template_side * cell)
            throw std::invalid_argument("params: patch_side must equal template_side * cell");
        if (!(min_size >= 1.0)) throw std::invalid_argument("params: min_size must be >= 1");
    }
};

struct TrackerState {
    TrackerParams params;
    BoundingBox box;
    FilterModel position_model;
    FilterModel scale_model;
    GaussianLabel label;
    CosineWindow window;
    std::size_t frame_index = 0;
};

struct TrackResult {
    std::size_t frame_index = 0;
    BoundingBox box;
    double position_peak = 0.0;
    double scale_factor = 1.0;
    std::optional<ResponseMap> response;
};

namespace detail {

inline PatchFeatures box_features(const GrayFrame& frame, const BoundingBox& box, const TrackerState& s) {
    const GrayFrame patch = sample_patch(frame, box, 1.0, s.params.pad, s.params.patch_side);
    return extract_features(patch, s.window, s.params.cell);
}

}  // namespace detail

/// Trains the position (gray + HOG) and scale (HOG) filters on the first frame.
inline TrackerState init(const GrayFrame& frame, const BoundingBox& box, const TrackerParams& params = {}) {
    params.validate();
    if (frame.empty()) throw std::invalid_argument("init: empty frame");
    if (!box.finite() || box.w < 1.0 || box.h < 1.0)
        throw std::invalid_argument("init: degenerate box (w and h must be >= 1 pixel)");

    TrackerState s;
    s.params = params;
    s.box = box;
    s.label = gaussian_label(params.template_side, params.template_side, params.sigma);
    s.window = CosineWindow::hann(params.template_side, params.template_side);

    const auto f = detail::box_features(frame, box, s);
    s.position_model = train_init(f.position, s.label, params.lambda);
    s.scale_model = train_init(f.scale, s.label, params.lambda);
    s.frame_index = 1;
    return s;
}

/// One frame: locate the target with the position filter, search scale at
/// the new centre, then update both filters from the final box.
inline std::pair<TrackerState, TrackResult> step(TrackerState state, const GrayFrame& frame,
                                                 bool keep_response = false) {
    if (frame.empty()) throw std::invalid_argument("step: empty frame");
    const auto& p = state.params;
    BoundingBox box = state.box;

    // position
    const GrayFrame patch = sample_patch(frame, box, 1.0, p.pad, p.patch_side);
    const FeatureMap z = extract_features(patch, state.window, p.cell).position;
    ResponseMap y = respond(state.position_model, z);
    const Peak peak = peak_locate(y);

    const double cell_px_x = static_cast<double>(p.cell) * p.pad * box.w / static_cast<double>(p.patch_side);
    const double cell_px_y = static_cast<double>(p.cell) * p.pad * box.h / static_cast<double>(p.patch_side);
    box.cx = std::clamp(box.cx + static_cast<double>(peak.dx) * cell_px_x, 0.0, static_cast<double>(frame.cols()));
    box.cy = std::clamp(box.cy + static_cast<double>(peak.dy) * cell_px_y, 0.0, static_cast<double>(frame.rows()));

    // scale
    const ScalePyramid pyr = pyramid(box.w, box.h, p.scale_step, p.scales, p.pad);
    const ScaleResult sr = best_scale(frame, box.cy, box.cx, box, state.scale_model, pyr, state.window,
                                      p.patch_side, p.cell);
    box.w = std::max(box.w * sr.factor, p.min_size);
    box.h = std::max(box.h * sr.factor, p.min_size);

    // update
    const auto f = detail::box_features(frame, box, state);
    state.position_model = update(state.position_model, f.position, state.label, p.eta);
    state.scale_model = update(state.scale_model, f.scale, state.label, p.eta);
    state.box = box;
    ++state.frame_index;

    TrackResult result;
    result.frame_index = state.frame_index;
    result.box = box;
    result.position_peak = peak.value;
    result.scale_factor = sr.factor;
    if (keep_response) result.response = std::move(y);
    return {std::move(state), std::move(result)};
}

}  // namespace cftrack
