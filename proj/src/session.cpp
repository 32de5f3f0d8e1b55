#include "mam/session.hpp"

#include "mam/interpolation.hpp"

#include <cmath>
#include <map>

namespace mam {

using nlohmann::ordered_json;

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::mam: return "MAM";
    case Method::pam: return "PAM";
    case Method::sam_vr: return "SAM_VR";
    case Method::sam_pp: return "SAM_PP";
    }
    return "?";
}

std::string_view to_string(RatingMode m)
{
    return m == RatingMode::vrr ? "VRR" : "PPR";
}

std::string_view to_string(EventType t)
{
    switch (t) {
    case EventType::stimulus_start: return "stimulus_start";
    case EventType::rating_shown: return "rating_shown";
    case EventType::trigger_press: return "trigger_press";
    case EventType::move: return "move";
    case EventType::trigger_release: return "trigger_release";
    case EventType::confirm: return "confirm";
    case EventType::hmd_removed: return "hmd_removed";
    case EventType::checkmark: return "checkmark";
    case EventType::hmd_reattached: return "hmd_reattached";
    }
    return "?";
}

Method method_from_string(std::string_view s)
{
    for (auto m : {Method::mam, Method::pam, Method::sam_vr, Method::sam_pp})
        if (to_string(m) == s)
            return m;
    throw EventValidationError("unknown method '" + std::string(s) + "'");
}

EventType event_type_from_string(std::string_view s)
{
    for (int i = 0; i <= static_cast<int>(EventType::hmd_reattached); ++i) {
        const auto t = static_cast<EventType>(i);
        if (to_string(t) == s)
            return t;
    }
    throw EventValidationError("unknown event_type '" + std::string(s) + "'");
}

RatingMode mode_of(Method m)
{
    return (m == Method::mam || m == Method::sam_vr) ? RatingMode::vrr : RatingMode::ppr;
}

std::string_view to_string(Mode m)
{
    return m == Mode::view ? "view" : "edit";
}

std::string_view to_string(ProtocolErrorKind k)
{
    switch (k) {
    case ProtocolErrorKind::press_in_edit: return "press_in_edit";
    case ProtocolErrorKind::release_in_view: return "release_in_view";
    case ProtocolErrorKind::confirm_in_edit: return "confirm_in_edit";
    case ProtocolErrorKind::confirm_without_stimulus: return "confirm_without_stimulus";
    case ProtocolErrorKind::already_committed: return "already_committed";
    case ProtocolErrorKind::missing_rating: return "missing_rating";
    }
    return "?";
}

NamedValues to_named(const FeatureVector& fv)
{
    NamedValues out;
    for (std::size_t i = 0; i < fv.size(); ++i)
        out.emplace_back((*fv.schema())[i].name, fv[i]);
    return out;
}

// ---- validation and serialization ----

void validate_event(const RatingEvent& e)
{
    auto fail = [&](const std::string& what) {
        throw EventValidationError(std::string(to_string(e.event_type)) + " event: " + what);
    };
    if (e.session_id.empty())
        fail("empty session_id");
    if (e.t_mono < 0)
        fail("negative t_mono");
    if (e.event_type == EventType::stimulus_start && e.stimulus_id.empty())
        fail("stimulus_start without stimulus_id");

    const auto& p = e.payload;
    if (p.cursor) {
        if (!(p.cursor->r >= 0.0 && p.cursor->r <= 1.0) || !(p.cursor->phi >= 0.0 && p.cursor->phi < 360.0))
            fail("cursor outside r in [0,1], phi in [0,360)");
    }
    if (p.va && (!std::isfinite(p.va->valence) || !std::isfinite(p.va->arousal) || !p.va->in_range()))
        fail("VA payload outside [1,5]");
    if (p.value && !std::isfinite(*p.value))
        fail("non-finite scale value");
    if (p.fv)
        for (const auto& [name, v] : *p.fv)
            if (name.empty() || !std::isfinite(v))
                fail("malformed feature vector payload");

    switch (e.event_type) {
    case EventType::move:
        if (!p.cursor || p.fv || p.va || p.value)
            fail("move must carry exactly a cursor");
        break;
    case EventType::confirm:
        if (p.cursor || p.value)
            fail("confirm may only carry fv and/or va");
        break;
    case EventType::checkmark:
        if (p.cursor || p.fv || p.va)
            fail("checkmark may only carry a scale value");
        break;
    default:
        if (!p.empty())
            fail("payload not allowed");
    }
}

ordered_json to_json(const RatingEvent& e)
{
    ordered_json j;
    j["session_id"] = e.session_id;
    j["subject_id"] = e.subject_id;
    j["method"] = std::string(to_string(e.method));
    j["stimulus_id"] = e.stimulus_id;
    j["event_type"] = std::string(to_string(e.event_type));
    j["t_mono"] = e.t_mono;
    j["t_wall"] = e.t_wall;
    if (e.payload.empty()) {
        j["payload"] = nullptr;
    } else {
        ordered_json p = ordered_json::object();
        if (e.payload.cursor)
            p["cursor"] = {{"r", e.payload.cursor->r}, {"phi", e.payload.cursor->phi}};
        if (e.payload.fv) {
            ordered_json fv = ordered_json::object();
            for (const auto& [name, v] : *e.payload.fv)
                fv[name] = v;
            p["fv"] = std::move(fv);
        }
        if (e.payload.va)
            p["va"] = {{"valence", e.payload.va->valence}, {"arousal", e.payload.va->arousal}};
        if (e.payload.value)
            p["value"] = *e.payload.value;
        j["payload"] = std::move(p);
    }
    return j;
}

namespace {

const ordered_json& field(const ordered_json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw EventValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string string_field(const ordered_json& j, const char* key)
{
    const auto& v = field(j, key);
    if (!v.is_string())
        throw EventValidationError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

double number_field(const ordered_json& j, const char* key)
{
    const auto& v = field(j, key);
    if (!v.is_number())
        throw EventValidationError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

} // namespace

RatingEvent event_from_json(const ordered_json& j)
{
    RatingEvent e;
    e.session_id = string_field(j, "session_id");
    e.subject_id = string_field(j, "subject_id");
    e.method = method_from_string(string_field(j, "method"));
    e.stimulus_id = string_field(j, "stimulus_id");
    e.event_type = event_type_from_string(string_field(j, "event_type"));
    const auto& t = field(j, "t_mono");
    if (!t.is_number_integer())
        throw EventValidationError("field 't_mono' must be an integer (milliseconds)");
    e.t_mono = t.get<std::int64_t>();
    e.t_wall = string_field(j, "t_wall");

    const auto& p = field(j, "payload");
    if (!p.is_null()) {
        if (!p.is_object())
            throw EventValidationError("payload must be an object or null");
        for (const auto& [key, _] : p.items())
            if (key != "cursor" && key != "fv" && key != "va" && key != "value")
                throw EventValidationError("unknown payload key '" + key + "'");
        if (p.contains("cursor"))
            e.payload.cursor = Cursor{number_field(p["cursor"], "r"), number_field(p["cursor"], "phi")};
        if (p.contains("fv")) {
            if (!p["fv"].is_object())
                throw EventValidationError("payload fv must be an object");
            NamedValues fv;
            for (const auto& [name, v] : p["fv"].items()) {
                if (!v.is_number())
                    throw EventValidationError("payload fv component '" + name + "' must be a number");
                fv.emplace_back(name, v.get<double>());
            }
            e.payload.fv = std::move(fv);
        }
        if (p.contains("va"))
            e.payload.va = VAScore{number_field(p["va"], "valence"), number_field(p["va"], "arousal")};
        if (p.contains("value"))
            e.payload.value = number_field(p, "value");
    }
    validate_event(e);
    return e;
}

std::string to_line(const RatingEvent& e)
{
    return to_json(e).dump();
}

RatingEvent parse_line(std::string_view line)
{
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& err) {
        throw EventValidationError(std::string("malformed record: ") + err.what());
    }
    return event_from_json(j);
}

// ---- state machine ----

Transition handle_event(const PolarMap& map, const SessionState& state, const RatingEvent& event)
{
    auto reject = [&](ProtocolErrorKind kind, std::string msg) {
        return Transition{state, ProtocolError{kind, std::move(msg)}};
    };

    SessionState next = state;
    switch (event.event_type) {
    case EventType::stimulus_start:
        next.mode = Mode::view;
        next.cursor = {};
        next.committed.reset();
        next.stimulus_id = event.stimulus_id;
        break;
    case EventType::trigger_press:
        if (state.mode == Mode::edit)
            return reject(ProtocolErrorKind::press_in_edit, "trigger already pressed");
        next.mode = Mode::edit;
        break;
    case EventType::move:
        if (state.mode == Mode::edit && event.payload.cursor)
            next.cursor = *event.payload.cursor;
        break;
    case EventType::trigger_release:
        if (state.mode == Mode::view)
            return reject(ProtocolErrorKind::release_in_view, "trigger released while not editing");
        next.mode = Mode::view;
        break;
    case EventType::confirm: {
        if (state.mode == Mode::edit)
            return reject(ProtocolErrorKind::confirm_in_edit, "release the trigger before confirming");
        if (!state.stimulus_id)
            return reject(ProtocolErrorKind::confirm_without_stimulus, "no stimulus is active");
        if (state.committed)
            return reject(ProtocolErrorKind::already_committed,
                          "rating for stimulus '" + *state.stimulus_id + "' already committed");
        if (event.method == Method::mam) {
            auto interp = interpolate(map, state.cursor);
            next.committed = Commit{state.cursor, std::move(interp.fv), interp.va};
        } else {
            if (!event.payload.va)
                return reject(ProtocolErrorKind::missing_rating, "confirm for a non-MAM method needs a VA payload");
            next.committed = Commit{std::nullopt, std::nullopt, *event.payload.va};
        }
        break;
    }
    case EventType::rating_shown:
    case EventType::hmd_removed:
    case EventType::checkmark:
    case EventType::hmd_reattached:
        break;
    }
    return {std::move(next), std::nullopt};
}

ReplayResult replay(const PolarMap& map, std::span<const RatingEvent> events)
{
    ReplayResult out;
    std::map<std::string, SessionState> states;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        auto& state = states[e.session_id];
        auto t = handle_event(map, state, e);
        if (t.error) {
            out.violations.push_back({i, e.session_id, std::move(*t.error)});
            continue;
        }
        const bool committed_now = !state.committed && t.state.committed;
        state = std::move(t.state);
        if (committed_now)
            out.ratings.push_back({e.session_id, e.subject_id, e.method, *state.stimulus_id, e.t_mono, *state.committed});
    }
    out.final_states.assign(states.begin(), states.end());
    return out;
}

} // namespace mam
