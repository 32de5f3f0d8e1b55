#include "mam/service.hpp"

#include "mam/durations.hpp"
#include "mam/event_log.hpp"
#include "mam/interpolation.hpp"
#include "mam/report.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <regex>

namespace mam {

using nlohmann::ordered_json;
using Response = SessionService::Response;

namespace {

const std::regex kSessionId("[A-Za-z0-9_-]{1,64}");

Response error(int status, std::string code, std::string message)
{
    return {status, ordered_json{{"error", std::move(code)}, {"message", std::move(message)}}};
}

std::int64_t steady_ms()
{
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

std::string wall_now()
{
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto t = system_clock::to_time_t(now);
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

ordered_json live(const PolarMap& map, const Cursor& c)
{
    const auto r = interpolate(map, c);
    return {{"fv", report::to_json(r.fv, report::Precision::exact)},
            {"va", report::to_json(r.va, report::Precision::exact)}};
}

} // namespace

SessionService::SessionService(const PolarMap& map, std::filesystem::path log_dir)
    : map_(map), log_dir_(std::move(log_dir))
{
    std::filesystem::create_directories(log_dir_);
}

SessionService::~SessionService() = default;

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id)
{
    std::lock_guard lock(sessions_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Response SessionService::create_session(const ordered_json& body)
{
    if (!body.is_object())
        return error(400, "bad_request", "body must be a JSON object");
    if (!body.contains("subject_id") || !body["subject_id"].is_string() || body["subject_id"].get<std::string>().empty())
        return error(400, "bad_request", "subject_id must be a non-empty string");
    if (!body.contains("method") || !body["method"].is_string())
        return error(400, "bad_request", "method must be one of MAM, PAM, SAM_VR, SAM_PP");
    Method method;
    try {
        method = method_from_string(body["method"].get<std::string>());
    } catch (const std::exception& e) {
        return error(400, "bad_request", e.what());
    }

    std::lock_guard lock(sessions_mu_);
    std::string id;
    if (body.contains("session_id")) {
        if (!body["session_id"].is_string() || !std::regex_match(body["session_id"].get<std::string>(), kSessionId))
            return error(400, "bad_request", "session_id must match [A-Za-z0-9_-]{1,64}");
        id = body["session_id"].get<std::string>();
        if (sessions_.count(id) || std::filesystem::exists(log_dir_ / (id + ".ndjson")))
            return error(409, "session_exists", "session '" + id + "' already exists");
    } else {
        do {
            char buf[16];
            std::snprintf(buf, sizeof buf, "s%04zu", next_id_++);
            id = buf;
        } while (sessions_.count(id) || std::filesystem::exists(log_dir_ / (id + ".ndjson")));
    }

    auto s = std::make_shared<Session>();
    s->id = id;
    s->subject_id = body["subject_id"].get<std::string>();
    s->method = method;
    s->log = std::make_unique<EventLog>(log_dir_ / (id + ".ndjson"));
    s->started_ms = steady_ms();
    sessions_.emplace(id, s);

    ordered_json out;
    out["session_id"] = id;
    out["subject_id"] = s->subject_id;
    out["method"] = std::string(to_string(method));
    out["log"] = s->log->path().string();
    out["state"] = report::to_json(s->state, report::Precision::exact);
    return {201, std::move(out)};
}

Response SessionService::post_event(const std::string& session_id, const ordered_json& body)
{
    auto s = find(session_id);
    if (!s)
        return error(404, "unknown_session", "no session '" + session_id + "'");
    if (!body.is_object())
        return error(400, "bad_request", "body must be a JSON object");

    std::lock_guard lock(s->mu);
    if (s->finalized)
        return error(410, "finalized", "session '" + session_id + "' is finalized");

    ordered_json j = body;
    if (j.contains("session_id") && j["session_id"] != session_id)
        return error(400, "bad_request", "session_id does not match the URL");
    j["session_id"] = session_id;
    if (!j.contains("subject_id"))
        j["subject_id"] = s->subject_id;
    if (!j.contains("method"))
        j["method"] = std::string(to_string(s->method));
    if (!j.contains("stimulus_id"))
        j["stimulus_id"] = s->state.stimulus_id.value_or("");
    if (!j.contains("t_mono"))
        j["t_mono"] = std::max(steady_ms() - s->started_ms, s->last_t);
    if (!j.contains("t_wall"))
        j["t_wall"] = wall_now();
    if (!j.contains("payload"))
        j["payload"] = nullptr;

    RatingEvent event;
    try {
        event = event_from_json(j);
        validate_event(event);
    } catch (const std::exception& e) {
        return error(400, "invalid_event", e.what());
    }
    if (event.subject_id != s->subject_id || event.method != s->method)
        return error(400, "invalid_event", "subject_id and method are fixed for the session");

    try {
        s->log->append(event);
    } catch (const ClockError& e) {
        return error(400, "clock", e.what());
    } catch (const std::exception& e) {
        return error(500, "io", e.what());
    }
    s->last_t = event.t_mono;

    // rejected events stay in the log; replay reports them as violations
    const auto t = handle_event(map_, s->state, event);
    if (t.error) {
        ordered_json out;
        out["error"] = std::string(to_string(t.error->kind));
        out["message"] = t.error->message;
        out["event"] = to_json(event);
        out["state"] = report::to_json(s->state, report::Precision::exact);
        return {409, std::move(out)};
    }
    s->state = t.state;

    ordered_json out;
    out["event"] = to_json(event);
    out["state"] = report::to_json(s->state, report::Precision::exact);
    out["live"] = live(map_, s->state.cursor);
    return {200, std::move(out)};
}

Response SessionService::get_state(const std::string& session_id)
{
    auto s = find(session_id);
    if (!s)
        return error(404, "unknown_session", "no session '" + session_id + "'");
    std::lock_guard lock(s->mu);
    ordered_json out;
    out["session_id"] = s->id;
    out["subject_id"] = s->subject_id;
    out["method"] = std::string(to_string(s->method));
    out["events"] = s->log->size();
    out["finalized"] = s->finalized;
    out["state"] = report::to_json(s->state, report::Precision::exact);
    out["live"] = live(map_, s->state.cursor);
    return {200, std::move(out)};
}

Response SessionService::finalize(const std::string& session_id)
{
    auto s = find(session_id);
    if (!s)
        return error(404, "unknown_session", "no session '" + session_id + "'");
    std::lock_guard lock(s->mu);
    std::vector<RatingEvent> events;
    try {
        events = read_log(s->log->path());
    } catch (const std::exception& e) {
        return error(500, "io", e.what());
    }
    s->finalized = true;
    const auto result = replay(map_, events);
    const auto dur = compute_durations(events);
    ordered_json out;
    out["session_id"] = s->id;
    out["events"] = events.size();
    const auto body = report::replay(result, dur, report::Precision::exact);
    for (auto& [k, v] : body.items())
        out[k] = v;
    return {200, std::move(out)};
}

Response SessionService::query_interp(const ordered_json& body)
{
    if (!body.is_object())
        return error(400, "bad_request", "body must be a JSON object");
    auto num = [&](const char* k) { return body.contains(k) && body[k].is_number(); };
    try {
        Cursor c;
        if (num("r") && num("phi"))
            c = Cursor::make(body["r"].get<double>(), body["phi"].get<double>());
        else if (num("x") && num("y"))
            c = clamp_cursor(body["x"].get<double>(), body["y"].get<double>());
        else
            return error(400, "bad_request", "expected {r, phi} or {x, y}");
        return {200, report::interpolation(c, interpolate(map_, c), report::Precision::exact)};
    } catch (const std::exception& e) {
        return error(400, "bad_request", e.what());
    }
}

void SessionService::install_routes()
{
    auto& srv = *server_;
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump() + "\n", "application/json");
    };
    auto with_body = [reply](httplib::Response& res, const std::string& text, auto&& fn) {
        ordered_json body = ordered_json::object();
        if (!text.empty()) {
            try {
                body = ordered_json::parse(text);
            } catch (const std::exception& e) {
                reply(res, error(400, "bad_json", e.what()));
                return;
            }
        }
        reply(res, fn(body));
    };

    srv.Post("/sessions", [this, with_body](const httplib::Request& req, httplib::Response& res) {
        with_body(res, req.body, [this](const ordered_json& b) { return create_session(b); });
    });
    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/events)",
             [this, with_body](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 with_body(res, req.body, [this, &id](const ordered_json& b) { return post_event(id, b); });
             });
    srv.Post(R"(/sessions/([A-Za-z0-9_-]+)/finalize)",
             [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, finalize(req.matches[1])); });
    srv.Get(R"(/sessions/([A-Za-z0-9_-]+))",
            [this, reply](const httplib::Request& req, httplib::Response& res) { reply(res, get_state(req.matches[1])); });
    srv.Post("/interp", [this, with_body](const httplib::Request& req, httplib::Response& res) {
        with_body(res, req.body, [this](const ordered_json& b) { return query_interp(b); });
    });
    srv.Post("/shutdown", [this, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, {200, ordered_json{{"status", "stopping"}}});
        server_->stop();
    });
    srv.set_exception_handler([reply](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        reply(res, error(500, "internal", what));
    });
}

int SessionService::bind(const std::string& host, int port)
{
    server_ = std::make_unique<httplib::Server>();
    install_routes();
    if (port == 0)
        return server_->bind_to_any_port(host);
    return server_->bind_to_port(host, port) ? port : -1;
}

bool SessionService::run()
{
    return server_ && server_->listen_after_bind();
}

void SessionService::stop()
{
    if (server_)
        server_->stop();
}

} // namespace mam
