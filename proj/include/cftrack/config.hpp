#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "pipeline_emu.hpp"
#include "tracker.hpp"

namespace cftrack {

/// Malformed or unreadable user input (files, config, arguments).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view text, std::string_view what) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw InputError("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

inline std::uint64_t parse_count(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw InputError("invalid count for " + std::string(what) + ": '" + std::string(text) + "'");
    return v;
}

}  // namespace detail

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// `key = value` lines; blank lines and lines starting with '#' are ignored.
inline KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw InputError("config line " + std::to_string(lineno) + ": expected key=value");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw InputError("config line " + std::to_string(lineno) + ": empty key");
        kv[std::string(key)] = std::string(value);
    }
    return kv;
}

inline KeyValues read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

inline TrackerParams tracker_params_from(const KeyValues& kv, TrackerParams p = {}) {
    for (const auto& [key, value] : kv) {
        if (key == "lambda") p.lambda = detail::parse_double(value, key);
        else if (key == "eta") p.eta = detail::parse_double(value, key);
        else if (key == "sigma") p.sigma = detail::parse_double(value, key);
        else if (key == "scales") p.scales = static_cast<int>(detail::parse_count(value, key));
        else if (key == "scale_step") p.scale_step = detail::parse_double(value, key);
        else if (key == "pad") p.pad = detail::parse_double(value, key);
        else if (key == "min_size") p.min_size = detail::parse_double(value, key);
        else throw InputError("unknown tracker parameter '" + key + "'");
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return p;
}

inline emu::EmuConfig emu_config_from(const KeyValues& kv, emu::EmuConfig c = {}) {
    for (const auto& [key, value] : kv) {
        if (key == "per_fft_cycles") c.per_fft_cycles = detail::parse_count(value, key);
        else if (key == "lane_count") c.lane_count = detail::parse_count(value, key);
        else if (key == "num_batches") c.num_batches = detail::parse_count(value, key);
        else if (key == "clock_hz") c.clock_hz = detail::parse_double(value, key);
        else if (key == "overhead_cycles") c.overhead_cycles = detail::parse_count(value, key);
        else if (key == "pointwise_cycles_per_batch") c.pointwise_cycles_per_batch = detail::parse_count(value, key);
        else if (key == "position_channels") c.position_channels = detail::parse_count(value, key);
        else if (key == "scale_channels") c.scale_channels = detail::parse_count(value, key);
        else if (key == "scale_levels") c.scale_levels = detail::parse_count(value, key);
        else if (key == "scale_fft_cores") c.scale_fft_cores = detail::parse_count(value, key);
        else throw InputError("unknown emulator parameter '" + key + "'");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return c;
}

}  // namespace cftrack
