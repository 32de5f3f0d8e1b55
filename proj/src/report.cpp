#include "mam/report.hpp"

#include <algorithm>
#include <cmath>

namespace mam::report {

ordered_json number(double x, Precision p)
{
    if (!std::isfinite(x))
        return nullptr;
    if (p == Precision::fixed6) {
        x = std::round(x * 1e6) / 1e6;
        if (x == 0.0)
            x = 0.0; // drop the sign of -0
    }
    return x;
}

ordered_json to_json(const FeatureVector& fv, Precision p)
{
    ordered_json j = ordered_json::object();
    for (std::size_t i = 0; i < fv.size(); ++i)
        j[(*fv.schema())[i].name] = number(fv[i], p);
    return j;
}

ordered_json to_json(const VAScore& va, Precision p)
{
    return {{"valence", number(va.valence, p)}, {"arousal", number(va.arousal, p)}};
}

ordered_json to_json(const Cursor& c, Precision p)
{
    return {{"r", number(c.r, p)}, {"phi", number(c.phi, p)}};
}

ordered_json to_json(const SessionState& s, Precision p)
{
    ordered_json j;
    j["mode"] = std::string(to_string(s.mode));
    j["cursor"] = to_json(s.cursor, p);
    j["stimulus_id"] = s.stimulus_id ? ordered_json(*s.stimulus_id) : ordered_json(nullptr);
    if (s.committed) {
        ordered_json c;
        c["cursor"] = s.committed->cursor ? to_json(*s.committed->cursor, p) : ordered_json(nullptr);
        c["fv"] = s.committed->fv ? to_json(*s.committed->fv, p) : ordered_json(nullptr);
        c["va"] = to_json(s.committed->va, p);
        j["committed"] = std::move(c);
    } else {
        j["committed"] = nullptr;
    }
    return j;
}

ordered_json interpolation(const Cursor& cursor, const Interpolation& result, Precision p)
{
    ordered_json j;
    j["cursor"] = to_json(cursor, p);
    ordered_json f;
    f["kind"] = result.field->kind == FieldKind::triangle ? "triangle" : "quad";
    f["sector"] = result.field->sector;
    f["theta"] = number(result.theta, p);
    f["radial"] = number(result.radial, p);
    j["field"] = std::move(f);
    j["fv"] = to_json(result.fv, p);
    j["va"] = to_json(result.va, p);
    return j;
}

ordered_json selection(const SelectionResult& result, const SelectionConfig& config)
{
    ordered_json j;
    ordered_json order = ordered_json::array();
    for (auto c : config.order)
        order.push_back(std::string(to_string(c)));
    j["precedence"] = std::move(order);

    ordered_json quads = ordered_json::object();
    const char* names[4] = {"Q1", "Q2", "Q3", "Q4"};
    for (std::size_t i = 0; i < 4; ++i)
        quads[names[i]] = {{"strong", result.quadrants[i].strong},
                           {"weak", result.quadrants[i].weak},
                           {"balanced", result.quadrants[i].balanced}};
    j["quadrants"] = std::move(quads);
    j["neutral_valence"] = result.neutral_valence;
    j["neutral_arousal"] = result.neutral_arousal;

    ordered_json audit;
    ordered_json slots = ordered_json::array();
    for (const auto& s : result.slots)
        slots.push_back({{"slot", s.slot},
                         {"category", std::string(to_string(s.category))},
                         {"chosen", s.chosen},
                         {"chosen_rank", s.chosen_rank},
                         {"ranked", s.ranked}});
    audit["slots"] = std::move(slots);
    ordered_json promos = ordered_json::array();
    for (const auto& p : result.promotions)
        promos.push_back({{"slot", p.slot}, {"skipped", p.skipped}, {"held_by", p.held_by}});
    audit["promotions"] = std::move(promos);
    audit["order_sensitive"] = result.order_sensitive;
    j["audit"] = std::move(audit);
    return j;
}

namespace {

ordered_json summary(const Summary& s, Precision p)
{
    return {{"n", s.n}, {"mean", number(s.mean, p)}, {"sd", number(s.sd, p)}};
}

} // namespace

ordered_json durations(const DurationReport& report, Precision p)
{
    ordered_json j;
    ordered_json ratings = ordered_json::array();
    for (const auto& r : report.ratings) {
        ordered_json e;
        e["session_id"] = r.session_id;
        e["subject_id"] = r.subject_id;
        e["method"] = std::string(to_string(r.method));
        e["mode"] = std::string(to_string(r.mode()));
        e["stimulus_id"] = r.stimulus_id;
        e["start_ms"] = r.start_ms;
        e["end_ms"] = r.end_ms;
        e["seconds"] = number(r.seconds, p);
        if (!r.checkmarks.empty()) {
            ordered_json marks = ordered_json::array();
            for (double c : r.checkmarks)
                marks.push_back(number(c, p));
            e["checkmarks"] = std::move(marks);
        }
        ratings.push_back(std::move(e));
    }
    j["ratings"] = std::move(ratings);
    ordered_json modes = ordered_json::object();
    for (const auto& [mode, s] : report.per_mode)
        modes[std::string(to_string(mode))] = summary(s, p);
    j["per_mode"] = std::move(modes);
    ordered_json methods = ordered_json::object();
    for (const auto& [method, s] : report.per_method)
        methods[std::string(to_string(method))] = summary(s, p);
    j["per_method"] = std::move(methods);
    j["excluded"] = report.excluded;
    return j;
}

ordered_json replay(const ReplayResult& result, const DurationReport& dur, Precision p)
{
    ordered_json j;
    ordered_json ratings = ordered_json::array();
    for (const auto& r : result.ratings) {
        ordered_json e;
        e["session_id"] = r.session_id;
        e["subject_id"] = r.subject_id;
        e["method"] = std::string(to_string(r.method));
        e["stimulus_id"] = r.stimulus_id;
        e["t_mono"] = r.t_mono;
        e["cursor"] = r.commit.cursor ? to_json(*r.commit.cursor, p) : ordered_json(nullptr);
        e["fv"] = r.commit.fv ? to_json(*r.commit.fv, p) : ordered_json(nullptr);
        e["va"] = to_json(r.commit.va, p);
        ratings.push_back(std::move(e));
    }
    j["ratings"] = std::move(ratings);
    ordered_json violations = ordered_json::array();
    for (const auto& v : result.violations)
        violations.push_back({{"index", v.index},
                              {"session_id", v.session_id},
                              {"error", std::string(to_string(v.error.kind))},
                              {"message", v.error.message}});
    j["violations"] = std::move(violations);
    ordered_json finals = ordered_json::object();
    for (const auto& [id, state] : result.final_states)
        finals[id] = to_json(state, p);
    j["final_states"] = std::move(finals);
    j["durations"] = durations(dur, p);
    return j;
}

ordered_json analysis(const std::vector<RatingRow>& rows, const std::vector<RatingGroup>& groups,
                      const std::vector<ICCOutcome>& iccs, double alpha)
{
    const auto p = Precision::fixed6;
    ordered_json j;
    j["model"] = "ICC(A,k): two-way layout, absolute agreement, average of k measures. "
                 "Rows are targets (subjects), columns are rating methods; one ICC per stimulus.";
    j["alpha"] = number(alpha, p);

    std::vector<std::string> dims;
    for (const auto& g : groups)
        if (std::find(dims.begin(), dims.end(), g.dimension) == dims.end())
            dims.push_back(g.dimension);

    ordered_json out_dims = ordered_json::array();
    for (const auto& dim : dims) {
        ordered_json d;
        d["dimension"] = dim;
        ordered_json table = ordered_json::array();
        double sum = 0.0;
        std::size_t used = 0, poor_lower = 0;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            const auto& g = groups[i];
            if (g.dimension != dim)
                continue;
            ordered_json e;
            e["stimulus"] = g.stimulus;
            e["n"] = g.matrix.rows();
            e["k"] = g.matrix.cols();
            if (!iccs[i].result) {
                e["error"] = iccs[i].error;
                table.push_back(std::move(e));
                continue;
            }
            const auto& r = *iccs[i].result;
            e["icc"] = number(r.icc, p);
            e["ci_low"] = number(r.ci_low, p);
            e["ci_high"] = number(r.ci_high, p);
            e["classification"] = std::string(to_string(r.classification));
            e["ms_rows"] = number(r.ms.rows, p);
            e["ms_cols"] = number(r.ms.cols, p);
            e["ms_error"] = number(r.ms.error, p);
            e["f"] = number(r.f_value, p);
            e["df1"] = number(r.df1, p);
            e["df2"] = number(r.df2, p);
            e["p"] = number(r.p_value, p);
            table.push_back(std::move(e));
            sum += r.icc;
            ++used;
            if (r.ci_low < 0.40)
                ++poor_lower;
        }
        d["icc"] = std::move(table);
        if (used > 0) {
            const double avg = sum / static_cast<double>(used);
            d["average_icc"] = number(avg, p);
            d["average_classification"] = std::string(to_string(classify_cicchetti(avg)));
        } else {
            d["average_icc"] = nullptr;
            d["average_classification"] = nullptr;
        }
        d["lower_bounds_in_poor_range"] = poor_lower;

        std::vector<MethodScores> by_method;
        for (const auto& r : rows) {
            if (r.dimension != dim)
                continue;
            auto it = std::find_if(by_method.begin(), by_method.end(),
                                   [&](const MethodScores& m) { return m.method == r.method; });
            if (it == by_method.end()) {
                by_method.push_back({r.method, {}});
                it = by_method.end() - 1;
            }
            it->scores.push_back(r.score);
        }
        ordered_json means = ordered_json::array();
        for (const auto& s : per_method_means(by_method))
            means.push_back({{"method", s.method}, {"n", s.n}, {"mean", number(s.mean, p)}, {"sd", number(s.sd, p)}});
        d["method_means"] = std::move(means);
        if (by_method.size() >= 2) {
            ordered_json names = ordered_json::array();
            for (const auto& m : by_method)
                names.push_back(m.method);
            ordered_json matrix = ordered_json::array();
            for (const auto& row : mean_difference_matrix(by_method)) {
                ordered_json jr = ordered_json::array();
                for (double v : row)
                    jr.push_back(number(v, p));
                matrix.push_back(std::move(jr));
            }
            d["mean_differences"] = {{"methods", std::move(names)}, {"matrix", std::move(matrix)}};
        }
        out_dims.push_back(std::move(d));
    }
    j["dimensions"] = std::move(out_dims);
    return j;
}

} // namespace mam::report
