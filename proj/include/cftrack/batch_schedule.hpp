#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cftrack {

/// Ordered channel batches processed one after another on a fixed set of lanes.
struct BatchSchedule {
    std::vector<std::vector<std::size_t>> batches;

    std::size_t batch_count() const noexcept { return batches.size(); }
    std::size_t largest_batch() const noexcept {
        std::size_t m = 0;
        for (const auto& b : batches) m = std::max(m, b.size());
        return m;
    }
    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s;
        for (const auto& b : batches) s.push_back(b.size());
        return s;
    }

    friend bool operator==(const BatchSchedule&, const BatchSchedule&) = default;
};

/// Throws unless the schedule covers every index in [0, d) exactly once.
inline void validate_partition(const BatchSchedule& schedule, std::size_t d) {
    std::vector<bool> seen(d, false);
    std::size_t covered = 0;
    for (const auto& batch : schedule.batches) {
        for (std::size_t ch : batch) {
            if (ch >= d)
                throw std::invalid_argument("batch schedule: channel " + std::to_string(ch) + " out of range for d=" +
                                            std::to_string(d));
            if (seen[ch]) throw std::invalid_argument("batch schedule: channel " + std::to_string(ch) + " repeated");
            seen[ch] = true;
            ++covered;
        }
    }
    if (covered != d)
        throw std::invalid_argument("batch schedule covers " + std::to_string(covered) + " of " + std::to_string(d) +
                                    " channels");
}

/// All channels in a single batch.
inline BatchSchedule single_batch(std::size_t d) {
    BatchSchedule s;
    s.batches.emplace_back();
    for (std::size_t i = 0; i < d; ++i) s.batches.front().push_back(i);
    return s;
}

}  // namespace cftrack
