#include "mam/durations.hpp"

#include <cmath>
#include <optional>
#include <tuple>

namespace mam {

Summary summarize_ms(std::span<const std::int64_t> ms)
{
    Summary s;
    s.n = ms.size();
    if (s.n == 0)
        return s;
    std::int64_t sum = 0;
    for (auto x : ms)
        sum += x;
    const double n = static_cast<double>(s.n);
    const double mean_ms = static_cast<double>(sum) / n;
    s.mean = mean_ms / 1000.0;
    if (s.n > 1) {
        double ss = 0.0;
        for (auto x : ms) {
            const double d = static_cast<double>(x) - mean_ms;
            ss += d * d;
        }
        s.sd = std::sqrt(ss / (n - 1.0)) / 1000.0;
    }
    return s;
}

namespace {

bool is_start(const RatingEvent& e)
{
    return mode_of(e.method) == RatingMode::vrr ? e.event_type == EventType::rating_shown
                                                : e.event_type == EventType::hmd_removed;
}

bool is_end(const RatingEvent& e)
{
    return mode_of(e.method) == RatingMode::vrr ? e.event_type == EventType::confirm
                                                : e.event_type == EventType::hmd_reattached;
}

struct Open {
    const RatingEvent* start;
    std::vector<double> checkmarks;
};

} // namespace

DurationReport compute_durations(std::span<const RatingEvent> events)
{
    std::map<std::string, std::vector<const RatingEvent*>> by_session;
    for (const auto& e : events)
        by_session[e.session_id].push_back(&e);

    std::vector<RatingDuration> ratings;
    std::size_t excluded = 0;
    for (const auto& [session, list] : by_session) {
        std::map<std::tuple<Method, std::string>, Open> open;
        for (const auto* e : list) {
            const auto key = std::make_tuple(e->method, e->stimulus_id);
            if (is_start(*e)) {
                auto [it, inserted] = open.try_emplace(key, Open{e, {}});
                if (!inserted) {
                    ++excluded;
                    it->second = Open{e, {}};
                }
            } else if (is_end(*e)) {
                auto it = open.find(key);
                if (it == open.end()) {
                    ++excluded;
                    continue;
                }
                const auto* s = it->second.start;
                ratings.push_back({session, s->subject_id, e->method, e->stimulus_id, s->t_mono, e->t_mono,
                                   static_cast<double>(e->t_mono - s->t_mono) / 1000.0,
                                   std::move(it->second.checkmarks)});
                open.erase(it);
            } else if (e->event_type == EventType::checkmark) {
                auto it = open.find(key);
                if (it != open.end())
                    it->second.checkmarks.push_back(static_cast<double>(e->t_mono - it->second.start->t_mono)
                                                    / 1000.0);
            }
        }
        excluded += open.size();
    }
    return aggregate(std::move(ratings), excluded);
}

DurationReport aggregate(std::vector<RatingDuration> ratings, std::size_t excluded)
{
    DurationReport report;
    std::map<RatingMode, std::vector<std::int64_t>> by_mode;
    std::map<Method, std::vector<std::int64_t>> by_method;
    for (const auto& r : ratings) {
        by_mode[r.mode()].push_back(r.end_ms - r.start_ms);
        by_method[r.method].push_back(r.end_ms - r.start_ms);
    }
    for (const auto& [mode, xs] : by_mode)
        report.per_mode[mode] = summarize_ms(xs);
    for (const auto& [method, xs] : by_method)
        report.per_method[method] = summarize_ms(xs);
    report.ratings = std::move(ratings);
    report.excluded = excluded;
    return report;
}

} // namespace mam
