#pragma once

#include "mam/session.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace mam {

class ClockError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Append-only newline-delimited event log. Rejects events whose monotonic
/// timestamp runs backwards within their session. One writer per file.
class EventLog {
public:
    /// Opens (or creates) the file; existing records seed the clock check.
    explicit EventLog(std::filesystem::path path);

    void append(const RatingEvent& event);

    const std::filesystem::path& path() const { return path_; }
    std::size_t size() const { return count_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::map<std::string, std::int64_t> last_t_;
    std::size_t count_ = 0;
};

/// Checks the event and the per-session clock, then appends it.
void append_event(std::vector<RatingEvent>& log, const RatingEvent& event);

/// Parses every non-empty line. Errors carry the 1-based line number.
std::vector<RatingEvent> read_log(std::istream& in);
std::vector<RatingEvent> read_log(const std::filesystem::path& path);

} // namespace mam
