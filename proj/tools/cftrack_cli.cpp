// Command-line harness: track, synth, eval, emulate.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cftrack/config.hpp"
#include "cftrack/harness.hpp"
#include "cftrack/pipeline_emu.hpp"
#include "cftrack/report.hpp"
#include "cftrack/tracker.hpp"

namespace fs = std::filesystem;
using namespace cftrack;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

std::pair<double, double> parse_pair(const std::string& text, char sep, const char* what) {
    const auto at = text.find(sep);
    if (at == std::string::npos) throw InputError(std::string(what) + ": expected two values separated by '" + sep + "'");
    return {detail::parse_double(text.substr(0, at), what), detail::parse_double(text.substr(at + 1), what)};
}

void print_metrics(std::ostream& os, const Metrics& m) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "mean_center_error: %.4f px\nprecision_at_20: %.4f\nmean_iou: %.4f\n",
                  m.mean_center_error, m.precision_at_20, m.mean_iou);
    os << buf;
    if (m.fps) {
        std::snprintf(buf, sizeof buf, "fps: %.2f\n", *m.fps);
        os << buf;
    } else {
        os << "fps: n/a\n";
    }
}

struct TrackArgs {
    std::string seq;
    std::string gt;
    std::string out;
    std::string params;
    std::string dump;
    std::string init;
};

int run_track(const TrackArgs& a) {
    const std::optional<fs::path> gt = a.gt.empty() ? std::nullopt : std::optional<fs::path>(a.gt);
    const Sequence seq = load_sequence(a.seq, gt);

    TrackerParams params;
    if (!a.params.empty()) params = tracker_params_from(read_key_values(a.params));

    BoundingBox initial;
    if (!a.init.empty()) initial = parse_truth_line(a.init);
    else if (seq.truth) initial = seq.truth->front();
    else throw InputError("track: need --gt or --init to know the initial box");

    std::ofstream out(a.out);
    if (!out) throw InputError("cannot write " + a.out);
    out << kResultsHeader << '\n';

    if (!a.dump.empty()) fs::create_directories(a.dump);
    auto on_result = [&](const TrackResult& r) {
        std::optional<BoundingBox> truth;
        if (seq.truth) truth = (*seq.truth)[r.frame_index - 1];
        out << format_result_row(r, truth) << '\n';
        if (r.response) {
            char name[64];
            std::snprintf(name, sizeof name, "response_%05zu.pgm", r.frame_index);
            write_response_pgm(fs::path(a.dump) / name, *r.response);
        }
    };
    const RunOutput run = run_tracker(seq, initial, params, on_result, !a.dump.empty());

    std::cout << "frames: " << seq.frames.size() << '\n';
    if (seq.truth) {
        print_metrics(std::cout, evaluate(run.results, *seq.truth, run.fps));
    } else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "fps: %.2f\n", run.fps);
        std::cout << buf;
    }
    return 0;
}

struct SynthArgs {
    std::string out;
    std::size_t frames = 100;
    std::string motion = "0,0";
    double zoom = 1.0;
    std::string size = "320x240";
    std::string target;
    std::uint64_t seed = 1;
};

int run_synth(const SynthArgs& a) {
    SynthSpec spec;
    const auto [w, h] = parse_pair(a.size, 'x', "--size");
    const auto [vx, vy] = parse_pair(a.motion, ',', "--motion");
    if (w < 1 || h < 1) throw InputError("--size must be positive");
    spec.width = static_cast<std::size_t>(w);
    spec.height = static_cast<std::size_t>(h);
    spec.frames = a.frames;
    spec.vx = vx;
    spec.vy = vy;
    spec.zoom = a.zoom;
    spec.seed = a.seed;
    if (!a.target.empty()) std::tie(spec.target_w, spec.target_h) = parse_pair(a.target, 'x', "--target");

    const Sequence seq = synth_sequence(spec);
    fs::create_directories(a.out);
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "frame_%05zu.pgm", i + 1);
        write_pgm(fs::path(a.out) / name, seq.frames[i]);
    }
    write_truth(fs::path(a.out) / "groundtruth_rect.txt", *seq.truth);
    std::cout << "wrote " << seq.frames.size() << " frames and groundtruth_rect.txt to " << a.out << '\n';
    return 0;
}

int run_eval(const std::string& results, const std::string& gt) {
    print_metrics(std::cout, evaluate(read_result_boxes(results), read_truth(gt)));
    return 0;
}

int run_emulate(const std::string& config, const std::string& csv_path) {
    emu::EmuConfig cfg;
    if (!config.empty()) cfg = emu_config_from(read_key_values(config));
    const emu::EmuReport rep = emu::emulate_frame(cfg);
    std::cout << emu::format_report_text(rep) << '\n' << emu::format_resource_csv(rep);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw InputError("cannot write " + csv_path);
        out << emu::format_resource_csv(rep);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Correlation-filter tracker with a hardware dataflow emulator"};
    app.require_subcommand(1);

    TrackArgs track;
    auto* track_cmd = app.add_subcommand("track", "Track a target through a directory of PGM frames");
    track_cmd->add_option("--seq", track.seq, "Directory of frames (lexicographic order)")->required();
    track_cmd->add_option("--gt", track.gt, "Ground truth file (x,y,w,h per line, 1-based)");
    track_cmd->add_option("--out", track.out, "Results CSV")->required();
    track_cmd->add_option("--params", track.params, "Tracker parameters (key=value file)");
    track_cmd->add_option("--dump-response", track.dump, "Write position response maps as PGM into this directory");
    track_cmd->add_option("--init", track.init, "Initial box x,y,w,h when no ground truth is given");

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic sequence with exact ground truth");
    synth_cmd->add_option("--out", synth.out, "Output directory")->required();
    synth_cmd->add_option("--frames", synth.frames, "Number of frames")->default_val(100);
    synth_cmd->add_option("--motion", synth.motion, "Velocity vx,vy in px/frame")->default_val("0,0");
    synth_cmd->add_option("--zoom", synth.zoom, "Zoom factor per frame")->default_val(1.0);
    synth_cmd->add_option("--size", synth.size, "Frame size WxH")->default_val("320x240");
    synth_cmd->add_option("--seed", synth.seed, "Texture seed")->default_val(1);
    synth_cmd->add_option("--target", synth.target, "Initial target size WxH (default: a fifth of the frame)");

    std::string results, gt;
    auto* eval_cmd = app.add_subcommand("eval", "Score a results CSV against ground truth");
    eval_cmd->add_option("--results", results, "Results CSV from track")->required();
    eval_cmd->add_option("--gt", gt, "Ground truth file")->required();

    std::string config, emu_csv;
    auto* emu_cmd = app.add_subcommand("emulate", "Report modelled cycles, throughput and resources");
    emu_cmd->add_option("--config", config, "Cost model (key=value file)");
    emu_cmd->add_option("--csv", emu_csv, "Also write the resource CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        if (*track_cmd) return run_track(track);
        if (*synth_cmd) return run_synth(synth);
        if (*eval_cmd) return run_eval(results, gt);
        if (*emu_cmd) return run_emulate(config, emu_csv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitInternal;
}
