#pragma once

#include "mam/polar_map.hpp"
#include "mam/session.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace httplib {
class Server;
}

namespace mam {

/// Local rating service for the face UI. Each session owns one append-only
/// log file `<log_dir>/<session_id>.ndjson`; events within a session are
/// serialized in arrival order, distinct sessions proceed independently.
///
///   POST /sessions                 {subject_id, method, session_id?}
///   POST /sessions/{id}/events     event record (session fields default from the session)
///   GET  /sessions/{id}            current state plus live fv/va at the cursor
///   POST /sessions/{id}/finalize   committed ratings and durations from the log
///   POST /interp                   {r, phi} or {x, y}
///   POST /shutdown
class SessionService {
public:
    struct Response {
        int status = 200;
        nlohmann::ordered_json body;
    };

    SessionService(const PolarMap& map, std::filesystem::path log_dir);
    ~SessionService();

    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    Response create_session(const nlohmann::ordered_json& body);
    Response post_event(const std::string& session_id, const nlohmann::ordered_json& body);
    Response get_state(const std::string& session_id);
    Response finalize(const std::string& session_id);
    Response query_interp(const nlohmann::ordered_json& body);

    /// Binds the HTTP listener; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop() or POST /shutdown.
    bool run();
    void stop();

private:
    struct Session {
        std::mutex mu;
        std::string id;
        std::string subject_id;
        Method method = Method::mam;
        SessionState state;
        std::unique_ptr<class EventLog> log;
        std::int64_t started_ms = 0;
        std::int64_t last_t = 0;
        bool finalized = false;
    };

    std::shared_ptr<Session> find(const std::string& id);
    void install_routes();

    const PolarMap& map_;
    std::filesystem::path log_dir_;
    std::mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::size_t next_id_ = 1;
    std::unique_ptr<httplib::Server> server_;
};

} // namespace mam
