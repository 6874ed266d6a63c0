// Acceptance checks, one line per criterion. Exit status is nonzero if any
// gating criterion fails; criterion 10 (CPU throughput) is advisory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "cftrack/harness.hpp"
#include "cftrack/pipeline_emu.hpp"
#include "cftrack/scale_search.hpp"
#include "oracles.hpp"

using namespace cftrack;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

FeatureMap windowed_random(std::mt19937_64& rng, std::size_t d) {
    static const auto win = CosineWindow::hann();
    FeatureMap f;
    for (std::size_t l = 0; l < d; ++l) {
        Plane p = oracle::random_plane(rng, 32, 32);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] *= win.weights[i];
        f.planes.push_back(std::move(p));
    }
    f.windowed = true;
    return f;
}

const GaussianLabel& label() {
    static const GaussianLabel g = gaussian_label(32, 32, 2.0);
    return g;
}

Outcome fft_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    double worst = 0.0;
    for (auto [n, count] : {std::pair{8u, 100}, std::pair{32u, 20}})
        for (int t = 0; t < count; ++t) {
            const Plane p = oracle::random_plane(rng, n, n);
            worst = std::max(worst, max_abs_diff(fft2d(p), oracle::dft2(to_complex(p))));
        }
    const double secs = seconds_since(t0);
    return {worst <= 1e-10 && secs < 10.0, fmt("max abs error %.3g, %.2f s", worst, secs)};
}

Outcome update_identities() {
    std::mt19937_64 rng(102);
    const auto m = train_init(windowed_random(rng, 33), label(), 0.01);
    const auto f = windowed_random(rng, 33);
    const auto fresh = train_init(f, label(), 0.01);
    const auto zero = update(m, f, label(), 0.0);
    const auto one = update(m, f, label(), 1.0);
    const auto half = update(m, f, label(), 0.5);
    const bool exact = zero.numerators == m.numerators && zero.denominator == m.denominator &&
                       one.numerators == fresh.numerators && one.denominator == fresh.denominator;
    double worst = 0.0;
    for (std::size_t i = 0; i < half.denominator.size(); ++i) {
        const double mean = (m.denominator[i] + fresh.denominator[i]) / 2.0;
        worst = std::max(worst, std::abs(half.denominator[i] - mean) / std::max(1.0, mean));
        for (std::size_t l = 0; l < half.channels(); ++l) {
            const Complex cm = (m.numerators[l][i] + fresh.numerators[l][i]) / 2.0;
            worst = std::max(worst, std::abs(half.numerators[l][i] - cm) / std::max(1.0, std::abs(cm)));
        }
    }
    return {exact && worst <= 1e-15, fmt("eta 0/1 bit-exact: %s, eta 0.5 max rel deviation %.3g",
                                         exact ? "yes" : "no", worst)};
}

Outcome self_response() {
    std::mt19937_64 rng(103);
    int at_origin = 0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto f = windowed_random(rng, 1);
        const auto y = respond(train_init(f, label(), 1e-8), f);
        const Peak p = peak_locate(y);
        if (p.dy == 0 && p.dx == 0) ++at_origin;
        worst = std::max(worst, max_abs_diff(y, label().plane));
    }
    return {at_origin == 50 && worst <= 1e-3, fmt("%d/50 peaks at origin, max |y-g| %.3g", at_origin, worst)};
}

Outcome shift_decoding() {
    std::mt19937_64 rng(104);
    const auto f = windowed_random(rng, 33);
    const auto m = train_init(f, label(), 0.01);
    int ok = 0, total = 0;
    for (long dy = -5; dy <= 5; ++dy)
        for (long dx = -5; dx <= 5; ++dx) {
            FeatureMap z = f;
            for (auto& p : z.planes) p = circshift(p, dy, dx);
            const Peak p = peak_locate(respond(m, z));
            ok += p.dy == dy && p.dx == dx;
            ++total;
        }
    return {ok == total, fmt("%d/%d shifts decoded", ok, total)};
}

Outcome batching() {
    std::mt19937_64 rng(105);
    const auto schedule = emu::make_batches(33, 8, 5);
    const bool shape = schedule.sizes() == std::vector<std::size_t>{5, 4, 4, 4, 4, 4, 4, 4};
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        const auto m = update(train_init(windowed_random(rng, 33), label(), 0.01), windowed_random(rng, 33), label(),
                              0.025);
        const auto z = windowed_random(rng, 33);
        worst = std::max(worst, max_abs_diff(respond_batched(m, z, schedule), respond(m, z)));
    }
    return {shape && worst <= 1e-10, fmt("schedule [5,4x7]: %s, max abs diff %.3g", shape ? "yes" : "no", worst)};
}

Outcome pyramid_factors() {
    const auto pyr = pyramid(100, 100, 1.005, 7, 2.0);
    double worst = 0.0;
    for (int n = -3; n <= 3; ++n)
        worst = std::max(worst, std::abs(pyr.factors[static_cast<std::size_t>(n + 3)] - std::pow(1.005, n)));
    const bool middle = pyr.factors[pyr.middle()] == 1.0;
    return {worst <= 1e-12 && middle, fmt("max factor error %.3g, middle exactly 1: %s", worst, middle ? "yes" : "no")};
}

struct TranslationRun {
    Metrics metrics;
    double seconds = 0.0;
};

const TranslationRun& translation_run() {
    static const TranslationRun run = [] {
        SynthSpec spec;
        spec.frames = 200;
        spec.vx = 2;
        spec.vy = 1;
        const auto t0 = Clock::now();
        const Sequence seq = synth_sequence(spec);
        const RunOutput out = run_tracker(seq, seq.truth->front());
        TranslationRun r;
        r.seconds = seconds_since(t0);
        r.metrics = evaluate(out.results, *seq.truth, out.fps);
        return r;
    }();
    return run;
}

Outcome translation() {
    const auto& r = translation_run();
    const bool ok = r.metrics.mean_center_error <= 3.0 && r.metrics.precision_at_20 == 1.0 && r.seconds < 60.0;
    return {ok, fmt("mean center error %.3f px, precision@20 %.3f, mean IoU %.3f, %.1f s", r.metrics.mean_center_error,
                    r.metrics.precision_at_20, r.metrics.mean_iou, r.seconds)};
}

Outcome zoom() {
    SynthSpec spec;
    spec.frames = 60;
    spec.zoom = 1.005;
    spec.target_w = spec.target_h = 100;
    const Sequence seq = synth_sequence(spec);
    const RunOutput out = run_tracker(seq, seq.truth->front());
    double cumulative = 1.0;
    int off = 0;
    for (std::size_t i = 1; i < out.results.size(); ++i) {
        const double f = out.results[i].scale_factor;
        cumulative *= f;
        // truth grows by one step per frame: selected exponent must lie in {0, 1, 2}
        const long n = std::lround(std::log(f) / std::log(1.005));
        if (out.results[i].frame_index > 5 && std::abs(n - 1) > 1) ++off;
    }
    const double target = std::pow(1.005, 60);
    const double rel = std::abs(cumulative - target) / target;
    return {rel <= 0.05 && off == 0, fmt("cumulative scale %.4f vs %.4f (%.2f%%), %d frames off by more than one step",
                                         cumulative, target, 100.0 * rel, off)};
}

Outcome emulator() {
    bool jobs_ok = true;
    for (std::size_t d : {1u, 32u, 33u})
        jobs_ok &= emu::schedule_fft_core(d, emu::make_batches(d)).size() == 64 * d + 64;
    const auto rep = emu::emulate_frame({});
    const bool exact = rep.fps_estimate == rep.clock_hz / static_cast<double>(rep.cycles_per_frame);
    return {jobs_ok && exact && rep.fps_estimate >= 153.0,
            fmt("jobs 64d+64: %s, fps = clock/cycles: %s, %llu cycles/frame -> %.2f fps (MODELED)", jobs_ok ? "yes" : "no",
                exact ? "yes" : "no", static_cast<unsigned long long>(rep.cycles_per_frame), rep.fps_estimate)};
}

Outcome throughput() {
    const auto& r = translation_run();
    const double fps = r.metrics.fps.value_or(0.0);
    return {fps >= 20.0, fmt("%.1f fps single-threaded on this machine", fps)};
}

Outcome partition_property() {
    std::mt19937_64 rng(111);
    std::uniform_int_distribution<std::size_t> dd(1, 128), ll(1, 8), bb(1, 40);
    int feasible = 0, bad = 0, infeasible = 0, missed_errors = 0;
    while (feasible < 1000) {
        const std::size_t d = dd(rng), lanes = ll(rng), nb = bb(rng);
        if (nb * lanes < d) {
            ++infeasible;
            try {
                emu::make_batches(d, nb, lanes);
                ++missed_errors;
            } catch (const std::invalid_argument&) {
            }
            continue;
        }
        ++feasible;
        const auto s = emu::make_batches(d, nb, lanes);
        std::set<std::size_t> seen;
        std::size_t count = 0;
        bool sizes_ok = s.batch_count() <= nb;
        for (const auto& b : s.batches) {
            sizes_ok &= !b.empty() && b.size() <= lanes;
            seen.insert(b.begin(), b.end());
            count += b.size();
        }
        if (!sizes_ok || count != d || seen.size() != d || *seen.rbegin() != d - 1) ++bad;
    }
    return {bad == 0 && missed_errors == 0,
            fmt("%d/1000 feasible triples violated, %d/%d infeasible triples accepted", bad, missed_errors, infeasible)};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
        bool gating;
    };
    const std::vector<Criterion> criteria{
        {1, "FFT oracle equivalence", fft_oracle, true},
        {2, "filter update identities", update_identities, true},
        {3, "self-response", self_response, true},
        {4, "shift decoding", shift_decoding, true},
        {5, "batching equivalence", batching, true},
        {6, "scale pyramid", pyramid_factors, true},
        {7, "synthetic translation", translation, true},
        {8, "synthetic zoom", zoom, true},
        {9, "emulator consistency", emulator, true},
        {10, "software throughput", throughput, false},
        {11, "batch partition property", partition_property, true},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const char* verdict = o.pass ? "PASS" : (c.gating ? "FAIL" : "WARN");
        std::printf("[%s] %2d %-26s %s%s\n", verdict, c.id, c.name, o.detail.c_str(),
                    c.gating ? "" : " (advisory)");
        if (!o.pass && c.gating) ++failures;
    }
    std::printf("%d gating failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
