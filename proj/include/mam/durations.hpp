#pragma once

#include "mam/session.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace mam {

struct RatingDuration {
    std::string session_id;
    std::string subject_id;
    Method method = Method::mam;
    std::string stimulus_id;
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;
    double seconds = 0.0;
    std::vector<double> checkmarks; // PPR: seconds from hmd_removed to each checkmark

    RatingMode mode() const { return mode_of(method); }
    bool operator==(const RatingDuration&) const = default;
};

struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; // sample SD, 0 when n < 2

    bool operator==(const Summary&) const = default;
};

/// Mean and SD of millisecond durations, reported in seconds. Sums are exact
/// integers, so constant inputs give their constant back bit-for-bit.
Summary summarize_ms(std::span<const std::int64_t> ms);

struct DurationReport {
    std::vector<RatingDuration> ratings; // grouped by session id, completion order within a session
    std::map<RatingMode, Summary> per_mode;
    std::map<Method, Summary> per_method;
    std::size_t excluded = 0; // incomplete start/end pairs

    bool operator==(const DurationReport&) const = default;
};

/// VRR: rating_shown -> confirm. PPR: hmd_removed -> hmd_reattached.
/// Pairs are keyed by (session, method, stimulus); a start without an end,
/// an end without a start, or a start superseded by a new start is excluded.
DurationReport compute_durations(std::span<const RatingEvent> events);

/// Aggregates already paired ratings (e.g. per-session reports concatenated).
DurationReport aggregate(std::vector<RatingDuration> ratings, std::size_t excluded);

} // namespace mam
