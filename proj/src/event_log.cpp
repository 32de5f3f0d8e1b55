#include "mam/event_log.hpp"

namespace mam {

namespace {

void check_clock(const std::map<std::string, std::int64_t>& last, const RatingEvent& e)
{
    auto it = last.find(e.session_id);
    if (it != last.end() && e.t_mono < it->second)
        throw ClockError("session '" + e.session_id + "': t_mono " + std::to_string(e.t_mono)
                         + " precedes previous " + std::to_string(it->second));
}

} // namespace

EventLog::EventLog(std::filesystem::path path) : path_(std::move(path))
{
    if (std::filesystem::exists(path_)) {
        for (const auto& e : read_log(path_)) {
            last_t_[e.session_id] = e.t_mono;
            ++count_;
        }
    }
    out_.open(path_, std::ios::app);
    if (!out_)
        throw std::runtime_error("cannot open event log '" + path_.string() + "' for appending");
}

void EventLog::append(const RatingEvent& event)
{
    validate_event(event);
    check_clock(last_t_, event);
    out_ << to_line(event) << '\n';
    out_.flush();
    if (!out_)
        throw std::runtime_error("write to event log '" + path_.string() + "' failed");
    last_t_[event.session_id] = event.t_mono;
    ++count_;
}

void append_event(std::vector<RatingEvent>& log, const RatingEvent& event)
{
    validate_event(event);
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (it->session_id == event.session_id) {
            if (event.t_mono < it->t_mono)
                throw ClockError("session '" + event.session_id + "': t_mono " + std::to_string(event.t_mono)
                                 + " precedes previous " + std::to_string(it->t_mono));
            break;
        }
    }
    log.push_back(event);
}

std::vector<RatingEvent> read_log(std::istream& in)
{
    std::vector<RatingEvent> out;
    std::map<std::string, std::int64_t> last;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        try {
            auto e = parse_line(line);
            check_clock(last, e);
            last[e.session_id] = e.t_mono;
            out.push_back(std::move(e));
        } catch (const EventValidationError& err) {
            throw EventValidationError("line " + std::to_string(lineno) + ": " + err.what());
        } catch (const ClockError& err) {
            throw ClockError("line " + std::to_string(lineno) + ": " + err.what());
        }
    }
    return out;
}

std::vector<RatingEvent> read_log(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open event log '" + path.string() + "'");
    return read_log(in);
}

} // namespace mam
