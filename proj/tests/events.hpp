#pragma once

#include "mam/session.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace testing_util {

inline mam::RatingEvent ev(const std::string& session, mam::Method method, const std::string& stimulus,
                           mam::EventType type, std::int64_t t, mam::Payload payload = {})
{
    mam::RatingEvent e;
    e.session_id = session;
    e.subject_id = "subj-" + session;
    e.method = method;
    e.stimulus_id = stimulus;
    e.event_type = type;
    e.t_mono = t;
    e.t_wall = "2020-01-01T00:00:00.000Z";
    e.payload = std::move(payload);
    return e;
}

inline mam::Payload cursor(double r, double phi)
{
    mam::Payload p;
    p.cursor = mam::Cursor::make(r, phi);
    return p;
}

inline mam::Payload va(double v, double a)
{
    mam::Payload p;
    p.va = mam::VAScore{v, a};
    return p;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& tag)
{
    std::random_device rd;
    auto dir = std::filesystem::temp_directory_path() / ("mam-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testing_util
