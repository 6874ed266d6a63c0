#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"
#include "imaging.hpp"
#include "tracker.hpp"

namespace cftrack {

struct Sequence {
    std::string name;
    std::vector<GrayFrame> frames;
    std::optional<std::vector<BoundingBox>> truth;
};

struct Metrics {
    double mean_center_error = 0.0;
    double precision_at_20 = 0.0;
    double mean_iou = 0.0;
    std::optional<double> fps;
};

// ---------------------------------------------------------------- images

namespace detail {

inline std::string next_pnm_token(std::istream& in) {
    std::string tok;
    while (in) {
        const int c = in.peek();
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    in >> tok;
    return tok;
}

}  // namespace detail

/// Binary (P5) or ASCII (P2) graymap with maxval <= 255, normalised to [0,1].
inline GrayFrame read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open image " + path.string());
    const std::string magic = detail::next_pnm_token(in);
    if (magic != "P5" && magic != "P2") throw InputError(path.string() + ": not a PGM file");
    long w = 0, h = 0, maxval = 0;
    try {
        w = std::stol(detail::next_pnm_token(in));
        h = std::stol(detail::next_pnm_token(in));
        maxval = std::stol(detail::next_pnm_token(in));
    } catch (const std::exception&) {
        throw InputError(path.string() + ": malformed PGM header");
    }
    if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
        throw InputError(path.string() + ": unsupported PGM dimensions or maxval");

    GrayFrame frame(static_cast<std::size_t>(h), static_cast<std::size_t>(w));
    const double scale = 1.0 / static_cast<double>(maxval);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> buf(frame.size());
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size())) throw InputError(path.string() + ": truncated PGM");
        for (std::size_t i = 0; i < buf.size(); ++i)
            frame[i] = std::min(1.0, static_cast<double>(buf[i]) * scale);
    } else {
        for (std::size_t i = 0; i < frame.size(); ++i) {
            long v = -1;
            if (!(in >> v) || v < 0 || v > maxval) throw InputError(path.string() + ": bad ASCII PGM sample");
            frame[i] = static_cast<double>(v) * scale;
        }
    }
    return frame;
}

/// 8-bit binary PGM; values are clamped to [0,1] and rounded.
inline void write_pgm(const std::filesystem::path& path, const GrayFrame& frame) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write image " + path.string());
    out << "P5\n" << frame.cols() << ' ' << frame.rows() << "\n255\n";
    std::vector<unsigned char> buf(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i)
        buf[i] = static_cast<unsigned char>(std::lround(std::clamp(frame[i], 0.0, 1.0) * 255.0));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

/// Min-max stretched response map image, peak shifted to the centre for viewing.
inline void write_response_pgm(const std::filesystem::path& path, const Plane& response) {
    Plane view = circshift(response, static_cast<long>(response.rows() / 2), static_cast<long>(response.cols() / 2));
    const auto [lo, hi] = std::minmax_element(view.begin(), view.end());
    const double low = *lo;
    const double span = *hi - *lo;
    for (auto& v : view) v = span > 0.0 ? (v - low) / span : 0.0;
    write_pgm(path, view);
}

// ---------------------------------------------------------------- ground truth

/// OTB-style "x,y,w,h" with a 1-based top-left corner; commas, tabs or spaces separate fields.
inline BoundingBox parse_truth_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    line = detail::trim(line);
    while (pos < line.size()) {
        const auto next = line.find_first_of(",\t ", pos);
        const auto field = detail::trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!field.empty()) fields.push_back(field);
        else if (next != std::string_view::npos && line[next] == ',') throw InputError("truth line: empty field");
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    if (fields.size() != 4)
        throw InputError("truth line '" + std::string(line) + "': expected 4 fields, got " + std::to_string(fields.size()));
    const double x = detail::parse_double(fields[0], "x");
    const double y = detail::parse_double(fields[1], "y");
    const double w = detail::parse_double(fields[2], "w");
    const double h = detail::parse_double(fields[3], "h");
    if (!(w > 0.0) || !(h > 0.0)) throw InputError("truth line '" + std::string(line) + "': w and h must be > 0");
    return {x - 1.0 + w / 2.0, y - 1.0 + h / 2.0, w, h};
}

inline std::string format_truth_line(const BoundingBox& b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", b.cx - b.w / 2.0 + 1.0, b.cy - b.h / 2.0 + 1.0, b.w, b.h);
    return buf;
}

inline std::vector<BoundingBox> read_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open ground truth " + path.string());
    std::vector<BoundingBox> boxes;
    std::string line;
    while (std::getline(in, line))
        if (!detail::trim(line).empty()) boxes.push_back(parse_truth_line(line));
    return boxes;
}

inline void write_truth(const std::filesystem::path& path, const std::vector<BoundingBox>& boxes) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write ground truth " + path.string());
    for (const auto& b : boxes) out << format_truth_line(b) << '\n';
}

/// All *.pgm files of a directory in lexicographic order, plus optional truth.
inline Sequence load_sequence(const std::filesystem::path& image_dir,
                              const std::optional<std::filesystem::path>& truth_path = std::nullopt) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(image_dir, ec)) throw InputError("not a directory: " + image_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(image_dir)) {
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (entry.is_regular_file() && ext == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw InputError("no .pgm frames in " + image_dir.string());

    Sequence seq;
    seq.name = image_dir.filename().string();
    for (const auto& f : files) seq.frames.push_back(read_pgm(f));
    if (truth_path) {
        auto truth = read_truth(*truth_path);
        if (truth.size() != seq.frames.size())
            throw InputError("ground truth has " + std::to_string(truth.size()) + " boxes for " +
                             std::to_string(seq.frames.size()) + " frames");
        seq.truth = std::move(truth);
    }
    return seq;
}

// ---------------------------------------------------------------- synthetic sequences

struct SynthSpec {
    std::size_t width = 320;
    std::size_t height = 240;
    std::size_t frames = 100;
    double vx = 0.0;
    double vy = 0.0;
    double zoom = 1.0;
    std::uint64_t seed = 1;
    double target_w = 0.0;  // 0: width / 5
    double target_h = 0.0;  // 0: height / 5
};

namespace detail {

// Value noise: uniform random lattice values sampled bilinearly.
class LatticeTexture {
public:
    LatticeTexture(std::uint64_t seed, std::size_t nx, std::size_t ny, double period, double lo, double hi)
        : nx_(nx), ny_(ny), period_(period), values_(nx * ny) {
        std::mt19937_64 rng(seed);
        for (auto& v : values_) v = lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }

    double at(double x, double y) const {
        const double gx = std::clamp(x / period_, 0.0, static_cast<double>(nx_ - 1));
        const double gy = std::clamp(y / period_, 0.0, static_cast<double>(ny_ - 1));
        const auto x0 = std::min(static_cast<std::size_t>(gx), nx_ - 2);
        const auto y0 = std::min(static_cast<std::size_t>(gy), ny_ - 2);
        const double fx = gx - static_cast<double>(x0);
        const double fy = gy - static_cast<double>(y0);
        const double top = std::lerp(values_[y0 * nx_ + x0], values_[y0 * nx_ + x0 + 1], fx);
        const double bot = std::lerp(values_[(y0 + 1) * nx_ + x0], values_[(y0 + 1) * nx_ + x0 + 1], fx);
        return std::lerp(top, bot, fy);
    }

private:
    std::size_t nx_;
    std::size_t ny_;
    double period_;
    std::vector<double> values_;
};

// Triangle-wave reflection of p into [lo, hi].
inline double reflect(double p, double lo, double hi) {
    const double span = hi - lo;
    if (span <= 0.0) return lo;
    double m = std::fmod(p - lo, 2.0 * span);
    if (m < 0.0) m += 2.0 * span;
    return lo + (m <= span ? m : 2.0 * span - m);
}

}  // namespace detail

/// Textured rectangle over a darker textured background. The target moves at
/// (vx, vy) px/frame, bouncing off the frame borders; zoom scales the whole
/// scene about the target centre by zoom^t at frame t. Truth boxes are exact
/// (w0 * zoom^t, unrounded). Frames are quantised to 8 bits.
inline Sequence synth_sequence(const SynthSpec& spec) {
    if (spec.width < 64 || spec.height < 64) throw InputError("synth: frame must be at least 64x64");
    if (spec.frames < 2) throw InputError("synth: need at least 2 frames");
    if (!(spec.zoom > 0.0) || !std::isfinite(spec.zoom) || !std::isfinite(spec.vx) || !std::isfinite(spec.vy))
        throw InputError("synth: motion and zoom must be finite, zoom > 0");

    const double W = static_cast<double>(spec.width);
    const double H = static_cast<double>(spec.height);
    const double w0 = spec.target_w > 0.0 ? spec.target_w : std::round(W / 5.0);
    const double h0 = spec.target_h > 0.0 ? spec.target_h : std::round(H / 5.0);
    constexpr double kMargin = 2.0;

    const double target_period = 6.0;
    const double background_period = 11.0;
    const detail::LatticeTexture target(spec.seed * 2 + 1, static_cast<std::size_t>(w0 / target_period) + 3,
                                        static_cast<std::size_t>(h0 / target_period) + 3, target_period, 0.45, 1.0);
    const detail::LatticeTexture background(spec.seed * 2 + 2, static_cast<std::size_t>(W / background_period) + 3,
                                            static_cast<std::size_t>(H / background_period) + 3, background_period,
                                            0.0, 0.35);

    Sequence seq;
    seq.name = "synthetic";
    seq.truth.emplace();
    for (std::size_t t = 0; t < spec.frames; ++t) {
        const double s = std::pow(spec.zoom, static_cast<double>(t));
        const double wt = w0 * s;
        const double ht = h0 * s;
        const double lo_x = wt / 2.0 + kMargin, hi_x = W - wt / 2.0 - kMargin;
        const double lo_y = ht / 2.0 + kMargin, hi_y = H - ht / 2.0 - kMargin;
        if (lo_x > hi_x || lo_y > hi_y)
            throw InputError("synth: target (" + std::to_string(wt) + "x" + std::to_string(ht) + ") leaves the frame at t=" +
                             std::to_string(t));
        const double cx = detail::reflect(W / 2.0 + spec.vx * static_cast<double>(t), lo_x, hi_x);
        const double cy = detail::reflect(H / 2.0 + spec.vy * static_cast<double>(t), lo_y, hi_y);

        GrayFrame frame(spec.height, spec.width);
        for (std::size_t y = 0; y < spec.height; ++y) {
            const double py = static_cast<double>(y) + 0.5;
            const double local_y = (py - cy) / s;
            for (std::size_t x = 0; x < spec.width; ++x) {
                const double px = static_cast<double>(x) + 0.5;
                const double local_x = (px - cx) / s;
                double v;
                if (std::abs(local_x) < w0 / 2.0 && std::abs(local_y) < h0 / 2.0)
                    v = target.at(local_x + w0 / 2.0, local_y + h0 / 2.0);
                else
                    v = background.at(cx + local_x, cy + local_y);
                frame(y, x) = std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
            }
        }
        seq.frames.push_back(std::move(frame));
        seq.truth->push_back({cx, cy, wt, ht});
    }
    return seq;
}

// ---------------------------------------------------------------- metrics

inline double center_error(const BoundingBox& a, const BoundingBox& b) {
    return std::hypot(a.cx - b.cx, a.cy - b.cy);
}

inline double iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.left() + a.w, b.left() + b.w) - std::max(a.left(), b.left()));
    const double iy = std::max(0.0, std::min(a.top() + a.h, b.top() + b.h) - std::max(a.top(), b.top()));
    const double inter = ix * iy;
    const double uni = a.w * a.h + b.w * b.h - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

inline Metrics evaluate(const std::vector<BoundingBox>& results, const std::vector<BoundingBox>& truth,
                        std::optional<double> fps = std::nullopt) {
    if (results.size() != truth.size())
        throw InputError("evaluate: " + std::to_string(results.size()) + " results for " +
                         std::to_string(truth.size()) + " truth boxes");
    Metrics m;
    m.fps = fps;
    if (results.empty()) return m;
    std::size_t within = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const double e = center_error(results[i], truth[i]);
        m.mean_center_error += e;
        m.mean_iou += iou(results[i], truth[i]);
        if (e <= 20.0) ++within;
    }
    const auto n = static_cast<double>(results.size());
    m.mean_center_error /= n;
    m.mean_iou /= n;
    m.precision_at_20 = static_cast<double>(within) / n;
    return m;
}

inline Metrics evaluate(const std::vector<TrackResult>& results, const std::vector<BoundingBox>& truth,
                        std::optional<double> fps = std::nullopt) {
    std::vector<BoundingBox> boxes;
    boxes.reserve(results.size());
    for (const auto& r : results) boxes.push_back(r.box);
    return evaluate(boxes, truth, fps);
}

// ---------------------------------------------------------------- running

struct RunOutput {
    std::vector<TrackResult> results;  // one per frame, the first is the initial box
    double step_seconds = 0.0;
    double fps = 0.0;
};

/// Initialises on frame 0 and steps through the rest. Timing covers step() only.
inline RunOutput run_tracker(const Sequence& seq, const BoundingBox& initial, const TrackerParams& params = {},
                             const std::function<void(const TrackResult&)>& on_result = {},
                             bool keep_response = false) {
    if (seq.frames.empty()) throw InputError("run_tracker: empty sequence");
    RunOutput out;
    TrackerState state = init(seq.frames.front(), initial, params);
    TrackResult first;
    first.frame_index = 1;
    first.box = initial;
    first.position_peak = std::nan("");
    out.results.push_back(first);
    if (on_result) on_result(first);

    using clock = std::chrono::steady_clock;
    clock::duration spent{};
    for (std::size_t i = 1; i < seq.frames.size(); ++i) {
        const auto t0 = clock::now();
        auto [next, result] = step(std::move(state), seq.frames[i], keep_response);
        spent += clock::now() - t0;
        state = std::move(next);
        if (on_result) on_result(result);
        result.response.reset();
        out.results.push_back(std::move(result));
    }
    out.step_seconds = std::chrono::duration<double>(spent).count();
    const auto steps = static_cast<double>(seq.frames.size() - 1);
    out.fps = out.step_seconds > 0.0 ? steps / out.step_seconds : 0.0;
    return out;
}

// ---------------------------------------------------------------- result CSV

inline constexpr std::string_view kResultsHeader = "frame,cx,cy,w,h,peak,scale_factor,center_error";

inline std::string format_result_row(const TrackResult& r, const std::optional<BoundingBox>& truth) {
    char buf[320];
    char peak[40] = "";
    char err[40] = "";
    if (std::isfinite(r.position_peak)) std::snprintf(peak, sizeof peak, "%.9g", r.position_peak);
    if (truth) std::snprintf(err, sizeof err, "%.6f", center_error(r.box, *truth));
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%s,%.9g,%s", r.frame_index, r.box.cx, r.box.cy, r.box.w,
                  r.box.h, peak, r.scale_factor, err);
    return buf;
}

/// Boxes from a results CSV written by `track` (header required).
inline std::vector<BoundingBox> read_result_boxes(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open results " + path.string());
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kResultsHeader)
        throw InputError(path.string() + ": missing results header '" + std::string(kResultsHeader) + "'");
    std::vector<BoundingBox> boxes;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cols.push_back(cell);
        if (cols.size() < 5) throw InputError(path.string() + ":" + std::to_string(lineno) + ": too few columns");
        boxes.push_back({detail::parse_double(cols[1], "cx"), detail::parse_double(cols[2], "cy"),
                         detail::parse_double(cols[3], "w"), detail::parse_double(cols[4], "h")});
    }
    return boxes;
}

}  // namespace cftrack
