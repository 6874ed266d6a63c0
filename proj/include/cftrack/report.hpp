#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "pipeline_emu.hpp"

namespace cftrack::emu {

/// CSV with columns category, modeled_count, paper_reference_count, paper_utilization.
inline std::string format_resource_csv(const EmuReport& rep) {
    std::ostringstream os;
    os << "category,modeled_count,paper_reference_count,paper_utilization\n";
    for (Resource r : kResources) {
        const auto ref = published_reference(r);
        char line[128];
        std::snprintf(line, sizeof line, "%s,%llu,%llu,%.2f\n", std::string(to_string(r)).c_str(),
                      static_cast<unsigned long long>(rep.resources.total.at(r)),
                      static_cast<unsigned long long>(ref.count), ref.utilization);
        os << line;
    }
    return os.str();
}

inline std::string format_report_text(const EmuReport& rep) {
    std::ostringstream os;
    char buf[256];
    auto sizes = [](const BatchSchedule& s) {
        std::string out = "[";
        for (std::size_t i = 0; i < s.batches.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(s.batches[i].size());
        }
        return out + "]";
    };

    os << "pipeline emulation (MODELED)\n";
    os << "  lanes per pipeline:      " << rep.lanes << '\n';
    os << "  position batches:        " << sizes(rep.position_schedule) << '\n';
    if (!rep.scale_schedule.batches.empty())
        os << "  scale batches per level: " << sizes(rep.scale_schedule) << '\n';
    os << "  1-D FFT invocations:     " << rep.fft_invocations << '\n';
    os << "  position cycles:         " << rep.position_cycles << '\n';
    os << "  scale cycles:            " << rep.scale_cycles << '\n';
    os << "  overhead cycles:         " << rep.overhead_cycles << '\n';
    os << "  cycles per frame:        " << rep.cycles_per_frame << '\n';
    std::snprintf(buf, sizeof buf, "  clock:                   %.3f MHz\n", rep.clock_hz / 1e6);
    os << buf;
    std::snprintf(buf, sizeof buf, "  fps estimate:            %.2f\n", rep.fps_estimate);
    os << buf;
    os << "resources (MODELED; published XC7K325T figures shown for reference only)\n";
    std::snprintf(buf, sizeof buf, "  %-10s %10s %10s %10s %10s\n", "category", "modeled", "util", "published",
                  "util");
    os << buf;
    for (Resource r : kResources) {
        const auto ref = published_reference(r);
        const auto count = rep.resources.total.at(r);
        std::snprintf(buf, sizeof buf, "  %-10s %10llu %9.1f%% %10llu %9.1f%%\n", std::string(to_string(r)).c_str(),
                      static_cast<unsigned long long>(count),
                      100.0 * static_cast<double>(count) / static_cast<double>(device_capacity(r)),
                      static_cast<unsigned long long>(ref.count), 100.0 * ref.utilization);
        os << buf;
    }
    return os.str();
}

}  // namespace cftrack::emu
