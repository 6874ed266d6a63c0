#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "batch_schedule.hpp"

// Software model of the tracker's hardware dataflow. Feature channels are
// processed in batches over a small number of filter lanes and every 1-D FFT
// pass (forward rows, forward columns, inverse rows, inverse columns) is
// serialised onto one time-multiplexed FFT core. All cycle and resource
// figures are model outputs, not measurements.

namespace cftrack::emu {

inline constexpr std::size_t kFftLength = 32;

/// Contiguous runs of channel indices, sizes differing by at most one,
/// larger runs first. When d < num_batches only d single-channel batches
/// are produced (no empty batches are scheduled).
inline BatchSchedule make_batches(std::size_t d, std::size_t num_batches = 8, std::size_t lane_count = 5) {
    if (d == 0) throw std::invalid_argument("make_batches: channel count must be >= 1");
    if (num_batches == 0 || lane_count == 0)
        throw std::invalid_argument("make_batches: num_batches and lane_count must be >= 1");
    if (num_batches * lane_count < d)
        throw std::invalid_argument("make_batches: " + std::to_string(num_batches) + " batches of " +
                                    std::to_string(lane_count) + " lanes cannot hold " + std::to_string(d) +
                                    " channels");

    const std::size_t used = std::min(d, num_batches);
    const std::size_t base = d / used;
    const std::size_t extra = d % used;
    BatchSchedule s;
    std::size_t next = 0;
    for (std::size_t b = 0; b < used; ++b) {
        const std::size_t size = base + (b < extra ? 1 : 0);
        auto& batch = s.batches.emplace_back();
        for (std::size_t k = 0; k < size; ++k) batch.push_back(next++);
    }
    return s;
}

enum class FftKind : std::uint8_t { forward_rows, forward_cols, inverse_rows, inverse_cols };

inline std::string_view to_string(FftKind k) {
    switch (k) {
        case FftKind::forward_rows: return "forward_rows";
        case FftKind::forward_cols: return "forward_cols";
        case FftKind::inverse_rows: return "inverse_rows";
        case FftKind::inverse_cols: return "inverse_cols";
    }
    return "?";
}

/// One 1-D pass of the shared FFT core.
struct FftJob {
    FftKind kind = FftKind::forward_rows;
    std::size_t plane_id = 0;  // channel index; the response plane uses id d
    std::size_t batch = 0;     // owning batch for forward passes
    std::size_t length = kFftLength;

    friend bool operator==(const FftJob&, const FftJob&) = default;
};

/// Serialises one response computation onto a single core: for each batch and
/// channel, 32 row passes then 32 column passes of the sample; afterwards the
/// row and column passes of the one inverse transform. 64*d + 64 jobs.
inline std::vector<FftJob> schedule_fft_core(std::size_t d, const BatchSchedule& schedule) {
    if (d == 0) throw std::invalid_argument("schedule_fft_core: empty workload");
    validate_partition(schedule, d);

    std::vector<FftJob> jobs;
    jobs.reserve(2 * kFftLength * (d + 1));
    for (std::size_t b = 0; b < schedule.batches.size(); ++b) {
        auto channels = schedule.batches[b];
        std::sort(channels.begin(), channels.end());
        for (std::size_t ch : channels) {
            for (std::size_t i = 0; i < kFftLength; ++i) jobs.push_back({FftKind::forward_rows, ch, b, kFftLength});
            for (std::size_t i = 0; i < kFftLength; ++i) jobs.push_back({FftKind::forward_cols, ch, b, kFftLength});
        }
    }
    const std::size_t last = schedule.batches.empty() ? 0 : schedule.batches.size() - 1;
    for (std::size_t i = 0; i < kFftLength; ++i) jobs.push_back({FftKind::inverse_rows, d, last, kFftLength});
    for (std::size_t i = 0; i < kFftLength; ++i) jobs.push_back({FftKind::inverse_cols, d, last, kFftLength});
    return jobs;
}

namespace detail {

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

inline std::size_t distinct_forward_batches(const std::vector<FftJob>& jobs) {
    std::set<std::size_t> seen;
    for (const auto& j : jobs)
        if (j.kind == FftKind::forward_rows || j.kind == FftKind::forward_cols) seen.insert(j.batch);
    return seen.size();
}

}  // namespace detail

/// cycles = ceil(jobs / cores) * per_fft_cycles + ceil(batches / cores) * pointwise + overhead.
/// With one core this is |jobs| * per_fft_cycles + sum of batch pointwise costs + overhead.
inline std::uint64_t cycle_count(const std::vector<FftJob>& jobs, std::uint64_t per_fft_cycles,
                                 std::uint64_t pointwise_cycles_per_batch = 0, std::uint64_t overhead = 0,
                                 std::uint64_t fft_cores = 1) {
    if (fft_cores == 0) throw std::invalid_argument("cycle_count: need at least one FFT core");
    for (const auto& j : jobs)
        if (per_fft_cycles < j.length)
            throw std::invalid_argument("cycle_count: per_fft_cycles below one sample per cycle");
    const std::uint64_t fft = detail::ceil_div(jobs.size(), fft_cores) * per_fft_cycles;
    const std::uint64_t pw =
        detail::ceil_div(detail::distinct_forward_batches(jobs), fft_cores) * pointwise_cycles_per_batch;
    return fft + pw + overhead;
}

/// Cost-model parameters. Keys match the key=value config file.
struct EmuConfig {
    std::uint64_t per_fft_cycles = 112;
    std::size_t lane_count = 5;
    std::size_t num_batches = 8;
    double clock_hz = 100e6;
    // streaming the 128x128 interpolated patch through extraction/HOG at one pixel per cycle
    std::uint64_t overhead_cycles = 128 * 128;
    // one pass over the 32x32 cells per batch; lanes of a batch run side by side
    std::uint64_t pointwise_cycles_per_batch = kFftLength * kFftLength;
    std::size_t position_channels = 33;
    std::size_t scale_channels = 32;
    std::size_t scale_levels = 7;
    // each scale level owns a filter pipeline with its own FFT core
    std::size_t scale_fft_cores = 7;

    void validate() const {
        if (per_fft_cycles < kFftLength) throw std::invalid_argument("per_fft_cycles must be >= 32");
        if (lane_count == 0 || num_batches == 0) throw std::invalid_argument("lane_count and num_batches must be >= 1");
        if (!(clock_hz > 0.0)) throw std::invalid_argument("clock_hz must be > 0");
        if (position_channels == 0) throw std::invalid_argument("position_channels must be >= 1");
        if (scale_levels > 0 && (scale_channels == 0 || scale_fft_cores == 0))
            throw std::invalid_argument("scale pipeline needs channels and at least one FFT core");
    }
};

enum class Resource : std::uint8_t { registers, luts, block_ram, dsp };
inline constexpr std::array<Resource, 4> kResources{Resource::registers, Resource::luts, Resource::block_ram,
                                                    Resource::dsp};

inline std::string_view to_string(Resource r) {
    switch (r) {
        case Resource::registers: return "registers";
        case Resource::luts: return "luts";
        case Resource::block_ram: return "block_ram";
        case Resource::dsp: return "dsp";
    }
    return "?";
}

/// Published utilisation on the XC7K325T, kept only as a labelled reference.
struct PublishedReference {
    std::uint64_t count;
    double utilization;
};

inline PublishedReference published_reference(Resource r) {
    switch (r) {
        case Resource::registers: return {95485, 0.23};
        case Resource::luts: return {68433, 0.33};
        case Resource::block_ram: return {179, 0.40};
        case Resource::dsp: return {143, 0.17};
    }
    return {0, 0.0};
}

inline std::uint64_t device_capacity(Resource r) {
    switch (r) {
        case Resource::registers: return 407600;
        case Resource::luts: return 203800;
        case Resource::block_ram: return 445;
        case Resource::dsp: return 840;
    }
    return 0;
}

using ResourceCounts = std::map<Resource, std::uint64_t>;

/// MODELED counts. Lane resources cover one complex multiply-accumulate path
/// with its coefficient buffer; FFT resources cover one 32-point pipelined
/// radix-2 core with its row/column transpose buffer; the fixed part covers
/// block extraction, interpolation, HOG and control.
struct ResourceModel {
    ResourceCounts per_lane{{Resource::registers, 1200}, {Resource::luts, 800}, {Resource::block_ram, 1},
                            {Resource::dsp, 2}};
    ResourceCounts per_fft_core{{Resource::registers, 2500}, {Resource::luts, 1800}, {Resource::block_ram, 2},
                                {Resource::dsp, 6}};
    ResourceCounts fixed{{Resource::registers, 20000}, {Resource::luts, 18000}, {Resource::block_ram, 60},
                         {Resource::dsp, 16}};
};

struct ResourceReport {
    std::size_t lanes = 0;
    std::size_t fft_cores = 0;
    ResourceCounts lane_attributed;
    ResourceCounts fft_attributed;
    ResourceCounts fixed;
    ResourceCounts total;
};

inline ResourceReport resource_report(std::size_t lane_count, std::size_t fft_cores = 1,
                                      const ResourceModel& model = {}) {
    if (lane_count == 0) throw std::invalid_argument("resource_report: lane_count must be >= 1");
    ResourceReport r;
    r.lanes = lane_count;
    r.fft_cores = fft_cores;
    for (Resource c : kResources) {
        r.lane_attributed[c] = model.per_lane.at(c) * lane_count;
        r.fft_attributed[c] = model.per_fft_core.at(c) * fft_cores;
        r.fixed[c] = model.fixed.at(c);
        r.total[c] = r.lane_attributed[c] + r.fft_attributed[c] + r.fixed[c];
    }
    return r;
}

struct EmuReport {
    std::uint64_t fft_invocations = 0;
    std::uint64_t position_cycles = 0;
    std::uint64_t scale_cycles = 0;
    std::uint64_t overhead_cycles = 0;
    std::uint64_t cycles_per_frame = 0;
    double clock_hz = 0.0;
    double fps_estimate = 0.0;
    std::size_t lanes = 0;
    BatchSchedule position_schedule;
    BatchSchedule scale_schedule;
    ResourceReport resources;
};

/// Position and scale pipelines run side by side:
/// frame cycles = max(position, scale) + shared overhead.
inline EmuReport emulate_frame(const EmuConfig& cfg) {
    cfg.validate();
    EmuReport rep;
    rep.lanes = cfg.lane_count;
    rep.clock_hz = cfg.clock_hz;
    rep.overhead_cycles = cfg.overhead_cycles;

    rep.position_schedule = make_batches(cfg.position_channels, cfg.num_batches, cfg.lane_count);
    const auto pos_jobs = schedule_fft_core(cfg.position_channels, rep.position_schedule);
    rep.position_cycles = cycle_count(pos_jobs, cfg.per_fft_cycles, cfg.pointwise_cycles_per_batch);
    rep.fft_invocations = pos_jobs.size();

    std::size_t scale_cores = 0;
    if (cfg.scale_levels > 0) {
        rep.scale_schedule = make_batches(cfg.scale_channels, cfg.num_batches, cfg.lane_count);
        const auto level_jobs = schedule_fft_core(cfg.scale_channels, rep.scale_schedule);
        const std::size_t batches_per_level = rep.scale_schedule.batch_count();
        std::vector<FftJob> all;
        all.reserve(level_jobs.size() * cfg.scale_levels);
        for (std::size_t lvl = 0; lvl < cfg.scale_levels; ++lvl)
            for (auto j : level_jobs) {
                j.batch += lvl * batches_per_level;
                all.push_back(j);
            }
        rep.scale_cycles = cycle_count(all, cfg.per_fft_cycles, cfg.pointwise_cycles_per_batch, 0,
                                       cfg.scale_fft_cores);
        rep.fft_invocations += all.size();
        scale_cores = cfg.scale_fft_cores;
    }

    rep.cycles_per_frame = std::max(rep.position_cycles, rep.scale_cycles) + cfg.overhead_cycles;
    rep.fps_estimate = cfg.clock_hz / static_cast<double>(rep.cycles_per_frame);
    rep.resources = resource_report(cfg.lane_count * (1 + scale_cores), 1 + scale_cores);
    return rep;
}

}  // namespace cftrack::emu
