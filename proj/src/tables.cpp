#include "mam/tables.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

namespace mam {

namespace {

std::string trim(std::string s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& s, std::size_t lineno, const char* column)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw TableError("line " + std::to_string(lineno) + ": " + column + " '" + s + "' is not a number");
    return v;
}

bool parse_bool(std::string s, std::size_t lineno)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "true" || s == "1" || s == "yes")
        return true;
    if (s == "false" || s == "0" || s == "no")
        return false;
    throw TableError("line " + std::to_string(lineno) + ": usable '" + s + "' is not a boolean");
}

bool blank(const std::string& line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

} // namespace

std::vector<StimulusRecord> read_corpus(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!blank(line))
            break;
    }
    if (split(line) != std::vector<std::string>{"id", "valence", "arousal", "usable"})
        throw TableError("corpus header must be 'id,valence,arousal,usable'");

    std::vector<StimulusRecord> out;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line))
            continue;
        const auto cols = split(line);
        if (cols.size() != 4)
            throw TableError("line " + std::to_string(lineno) + ": expected 4 columns");
        StimulusRecord r{cols[0], parse_number(cols[1], lineno, "valence"), parse_number(cols[2], lineno, "arousal"),
                         parse_bool(cols[3], lineno)};
        if (r.id.empty())
            throw TableError("line " + std::to_string(lineno) + ": empty id");
        if (!seen.insert(r.id).second)
            throw TableError("line " + std::to_string(lineno) + ": duplicate id '" + r.id + "'");
        if (r.valence_raw < 1.0 || r.valence_raw > 9.0 || r.arousal_raw < 1.0 || r.arousal_raw > 9.0)
            throw TableError("line " + std::to_string(lineno) + ": scores must lie in [1,9]");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RatingRow> read_ratings(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!blank(line))
            break;
    }
    const auto header = split(line);
    auto column = [&](const char* name) -> std::ptrdiff_t {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : it - header.begin();
    };
    const auto c_target = column("target_id"), c_method = column("method"), c_score = column("score");
    const auto c_stim = column("stimulus"), c_dim = column("dimension");
    if (c_target < 0 || c_method < 0 || c_score < 0)
        throw TableError("ratings header must contain target_id, method and score");
    for (const auto& h : header)
        if (h != "target_id" && h != "method" && h != "score" && h != "stimulus" && h != "dimension")
            throw TableError("unknown ratings column '" + h + "'");

    std::vector<RatingRow> out;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line))
            continue;
        const auto cols = split(line);
        if (cols.size() != header.size())
            throw TableError("line " + std::to_string(lineno) + ": expected " + std::to_string(header.size())
                             + " columns");
        RatingRow r;
        r.target_id = cols[c_target];
        r.method = cols[c_method];
        r.score = parse_number(cols[c_score], lineno, "score");
        if (c_stim >= 0)
            r.stimulus = cols[c_stim];
        if (c_dim >= 0)
            r.dimension = cols[c_dim];
        if (r.target_id.empty() || r.method.empty())
            throw TableError("line " + std::to_string(lineno) + ": empty target_id or method");
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<RatingGroup> pivot_ratings(const std::vector<RatingRow>& rows)
{
    struct Building {
        std::string dimension, stimulus;
        std::vector<std::string> targets, methods;
        std::map<std::pair<std::string, std::string>, double> cells;
    };
    std::vector<Building> groups;
    for (const auto& r : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Building& g) {
            return g.dimension == r.dimension && g.stimulus == r.stimulus;
        });
        if (it == groups.end()) {
            groups.push_back({r.dimension, r.stimulus, {}, {}, {}});
            it = groups.end() - 1;
        }
        if (std::find(it->targets.begin(), it->targets.end(), r.target_id) == it->targets.end())
            it->targets.push_back(r.target_id);
        if (std::find(it->methods.begin(), it->methods.end(), r.method) == it->methods.end())
            it->methods.push_back(r.method);
        if (!it->cells.emplace(std::make_pair(r.target_id, r.method), r.score).second)
            throw TableError("duplicate rating for target '" + r.target_id + "', method '" + r.method + "'"
                             + (r.stimulus.empty() ? "" : " (stimulus '" + r.stimulus + "')"));
    }

    std::vector<RatingGroup> out;
    for (auto& g : groups) {
        std::vector<double> cells;
        for (const auto& t : g.targets)
            for (const auto& m : g.methods) {
                auto c = g.cells.find({t, m});
                if (c == g.cells.end())
                    throw TableError("missing rating for target '" + t + "', method '" + m + "'"
                                     + (g.stimulus.empty() ? "" : " (stimulus '" + g.stimulus + "')"));
                cells.push_back(c->second);
            }
        const auto n = g.targets.size(), k = g.methods.size();
        out.push_back({g.dimension, g.stimulus, std::move(g.targets), std::move(g.methods),
                       RatingsMatrix(n, k, std::move(cells))});
    }
    return out;
}

} // namespace mam
