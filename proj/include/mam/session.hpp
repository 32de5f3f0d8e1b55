#pragma once

#include "mam/feature_vector.hpp"
#include "mam/polar_map.hpp"
#include "mam/scales.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mam {

enum class Method { mam, pam, sam_vr, sam_pp };

/// In-VR ratings (VRR) versus paper-pencil ratings (PPR).
enum class RatingMode { vrr, ppr };

enum class EventType {
    stimulus_start,
    rating_shown,
    trigger_press,
    move,
    trigger_release,
    confirm,
    hmd_removed,
    checkmark,
    hmd_reattached,
};

std::string_view to_string(Method m);
std::string_view to_string(RatingMode m);
std::string_view to_string(EventType t);
Method method_from_string(std::string_view s);
EventType event_type_from_string(std::string_view s);
RatingMode mode_of(Method m);

/// Feature values keyed by parameter name, as they appear in logs.
using NamedValues = std::vector<std::pair<std::string, double>>;

NamedValues to_named(const FeatureVector& fv);

struct Payload {
    std::optional<Cursor> cursor;
    std::optional<NamedValues> fv;
    std::optional<VAScore> va;
    std::optional<double> value;

    bool empty() const { return !cursor && !fv && !va && !value; }
    bool operator==(const Payload&) const = default;
};

struct RatingEvent {
    std::string session_id;
    std::string subject_id;
    Method method = Method::mam;
    std::string stimulus_id;
    EventType event_type = EventType::move;
    std::int64_t t_mono = 0; // ms, monotonic clock
    std::string t_wall;      // calendar timestamp, audit only
    Payload payload;

    bool operator==(const RatingEvent&) const = default;
};

class EventValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Field and payload/type compatibility checks. Throws EventValidationError.
void validate_event(const RatingEvent& e);

nlohmann::ordered_json to_json(const RatingEvent& e);
RatingEvent event_from_json(const nlohmann::ordered_json& j);

/// One compact JSON object, no trailing newline.
std::string to_line(const RatingEvent& e);
RatingEvent parse_line(std::string_view line);

// ---- state machine ----

enum class Mode { view, edit };

std::string_view to_string(Mode m);

struct Commit {
    std::optional<Cursor> cursor;
    std::optional<FeatureVector> fv;
    VAScore va;

    bool operator==(const Commit&) const = default;
};

struct SessionState {
    Mode mode = Mode::view;
    Cursor cursor;
    std::optional<Commit> committed;
    std::optional<std::string> stimulus_id;

    bool operator==(const SessionState&) const = default;
};

enum class ProtocolErrorKind {
    press_in_edit,
    release_in_view,
    confirm_in_edit,
    confirm_without_stimulus,
    already_committed,
    missing_rating,
};

std::string_view to_string(ProtocolErrorKind k);

struct ProtocolError {
    ProtocolErrorKind kind;
    std::string message;
};

struct Transition {
    SessionState state;
    std::optional<ProtocolError> error; // set when the event was rejected; state is then unchanged
};

/// View mode ignores moves; trigger press/release toggle Edit; confirm in View
/// fixes the rating for the current stimulus (interpolated from the cursor for
/// MAM, taken from the VA payload for the other methods).
Transition handle_event(const PolarMap& map, const SessionState& state, const RatingEvent& event);

struct CommittedRating {
    std::string session_id;
    std::string subject_id;
    Method method = Method::mam;
    std::string stimulus_id;
    std::int64_t t_mono = 0;
    Commit commit;
};

struct Violation {
    std::size_t index = 0; // position in the replayed event sequence
    std::string session_id;
    ProtocolError error;
};

struct ReplayResult {
    std::vector<CommittedRating> ratings;
    std::vector<Violation> violations;
    std::vector<std::pair<std::string, SessionState>> final_states; // sorted by session id
};

/// Runs every session's events through handle_event in log order.
ReplayResult replay(const PolarMap& map, std::span<const RatingEvent> events);

} // namespace mam
