#include "mam/cli.hpp"

#include "mam/analysis.hpp"
#include "mam/durations.hpp"
#include "mam/event_log.hpp"
#include "mam/interpolation.hpp"
#include "mam/polar_map.hpp"
#include "mam/report.hpp"
#include "mam/service.hpp"
#include "mam/stimulus_selection.hpp"
#include "mam/tables.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

namespace mam::cli {

namespace {

using report::ordered_json;
using report::Precision;

struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Failure{io, "cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad())
        throw Failure{io, "error reading '" + path + "'"};
    return ss.str();
}

PolarMap resolve_map(const std::string& flag)
{
    std::string path = flag;
    if (path.empty())
        if (const char* env = std::getenv(map_env); env && *env)
            path = env;
    if (path.empty())
        return default_map();
    const auto text = read_file(path);
    try {
        return load_map(text);
    } catch (const MapError& e) {
        throw Failure{invalid_input, path + ": " + e.what()};
    }
}

void print(std::ostream& out, const ordered_json& j)
{
    out << j.dump(2) << '\n';
}

std::vector<Category> parse_order(const std::string& text)
{
    std::vector<Category> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(category_from_string(text.substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return out;
}

const char* kFormats = R"(Formats:
  map (JSON): {"schema": [{"name", "min", "max"}, ...],
               "expressions": [{"name", "ring": center|inner|outer, "angle_deg",
                                "fv": {param: value}, "valence", "arousal"}, ...]}
    nine expressions: neutral at the center, four on the inner ring (r = 0.5)
    and four on the outer ring (r = 1), 90 degrees apart, outer aligned with inner.
    Without --map the map named by $MAM_MAP is used, otherwise the built-in one.
  corpus (CSV): header id,valence,arousal,usable; scores on the 1..9 scale;
    usable is true/false/1/0/yes/no.
  ratings (CSV): columns target_id,method,score plus optional stimulus and
    dimension; one ICC(A,k) per (dimension, stimulus) with targets as rows and
    methods as columns.
  event log (NDJSON): one object per line with session_id, subject_id,
    method (MAM|PAM|SAM_VR|SAM_PP), stimulus_id, event_type, t_mono
    (integer ms), t_wall, payload (null or {cursor: {r, phi}, fv, va:
    {valence, arousal}, value}). event_type is one of stimulus_start,
    rating_shown, trigger_press, move, trigger_release, confirm, hmd_removed,
    checkmark, hmd_reattached.
  reports: JSON on stdout, numbers rounded to 6 decimals.

Exit codes: 0 ok, 2 usage, 3 unreadable file, 4 invalid input,
  5 analysis or selection failure, 6 service failure.)";

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Morph-A-Mood toolkit: polar expression map, stimulus selection, rating sessions and "
                 "agreement statistics.",
                 "mam"};
    app.footer(kFormats);
    app.require_subcommand(1);

    std::string map_path;

    auto* interp = app.add_subcommand("interp", "Print the interpolated FeatureVector and VA at a cursor.");
    std::optional<double> r, phi, x, y;
    interp->add_option("--r", r, "radius in [0,1]");
    interp->add_option("--phi", phi, "angle in degrees");
    interp->add_option("--x", x, "cartesian x (clamped to the unit disk)");
    interp->add_option("--y", y, "cartesian y");
    interp->add_option("--map", map_path, "map JSON file");

    auto* validate = app.add_subcommand("validate-map", "Check a map file against the map invariants.");
    std::string validate_path;
    validate->add_option("PATH", validate_path, "map JSON file")->required();

    auto* show = app.add_subcommand("show-map", "Print the active map in canonical JSON.");
    show->add_option("--map", map_path, "map JSON file");

    auto* select = app.add_subcommand("select-stimuli", "Select the 16 protocol stimuli with an audit trace.");
    std::string corpus_path, order_text = "extremes,balanced,neutral";
    std::size_t n_valence = 2, n_arousal = 2;
    select->add_option("CORPUS", corpus_path, "corpus CSV")->required();
    select->add_option("--order", order_text, "category precedence, comma separated")->capture_default_str();
    select->add_option("--neutral-valence", n_valence, "neutral-valence picks")->capture_default_str();
    select->add_option("--neutral-arousal", n_arousal, "neutral-arousal picks")->capture_default_str();

    auto* serve = app.add_subcommand("serve", "Run the local session service (HTTP/JSON).");
    int port = 0;
    std::string host = "127.0.0.1", log_dir = "sessions";
    serve->add_option("--port", port, "TCP port, 0 picks a free one")->required();
    serve->add_option("--host", host, "listen address")->capture_default_str();
    serve->add_option("--log-dir", log_dir, "directory for per-session logs")->capture_default_str();
    serve->add_option("--map", map_path, "map JSON file");
    serve->footer(R"(Endpoints:
  POST /sessions                {subject_id, method, session_id?}
  POST /sessions/{id}/events    event fields; omitted session fields, t_mono and t_wall are filled in
  GET  /sessions/{id}           state and live FeatureVector/VA at the cursor
  POST /sessions/{id}/finalize  committed ratings and durations
  POST /interp                  {r, phi} or {x, y}
  POST /shutdown)");

    auto* replay_cmd = app.add_subcommand("replay", "Recompute committed ratings and durations from a log.");
    std::string log_path;
    replay_cmd->add_option("LOG", log_path, "event log (NDJSON)")->required();
    replay_cmd->add_option("--map", map_path, "map JSON file");

    auto* icc = app.add_subcommand("icc", "ICC(A,k) agreement report for a ratings table.");
    std::string ratings_path;
    double confidence = 0.95;
    icc->add_option("RATINGS", ratings_path, "ratings CSV")->required();
    icc->add_option("--confidence", confidence, "confidence level of the interval")
        ->capture_default_str()
        ->check(CLI::Range(0.5, 0.9999));

    auto* dur = app.add_subcommand("durations", "Rating duration report for a log.");
    dur->add_option("LOG", log_path, "event log (NDJSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? ok : usage;
    }

    try {
        if (interp->parsed()) {
            Cursor c;
            if (r && phi && !x && !y)
                c = Cursor::make(*r, *phi);
            else if (x && y && !r && !phi)
                c = clamp_cursor(*x, *y);
            else
                throw Failure{usage, "interp needs either --r and --phi or --x and --y"};
            const auto map = resolve_map(map_path);
            print(out, report::interpolation(c, interpolate(map, c), Precision::fixed6));
        } else if (validate->parsed()) {
            const auto text = read_file(validate_path);
            const auto map = load_map(text);
            ordered_json j;
            j["valid"] = true;
            j["parameters"] = map.schema()->size();
            j["expressions"] = map.expressions().size();
            ordered_json fields = ordered_json::array();
            for (const auto& f : map.fields())
                fields.push_back({{"kind", f.kind == FieldKind::triangle ? "triangle" : "quad"},
                                  {"sector", f.sector},
                                  {"vertices",
                                   {map.expressions()[f.e_a].name, map.expressions()[f.e_b].name,
                                    map.expressions()[f.e_d].name, map.expressions()[f.e_c].name}}});
            j["fields"] = std::move(fields);
            print(out, j);
        } else if (show->parsed()) {
            out << serialize_map(resolve_map(map_path));
        } else if (select->parsed()) {
            const auto text = read_file(corpus_path);
            std::istringstream in(text);
            const auto corpus = read_corpus(in);
            SelectionConfig config;
            const auto order = parse_order(order_text);
            if (order.size() != config.order.size())
                throw std::invalid_argument("--order must name extremes, balanced and neutral once each");
            std::copy(order.begin(), order.end(), config.order.begin());
            config.neutral_valence = n_valence;
            config.neutral_arousal = n_arousal;
            const auto result = select_protocol(corpus, config);
            print(out, report::selection(result, config));
        } else if (serve->parsed()) {
            const auto map = resolve_map(map_path);
            SessionService svc(map, log_dir);
            const int bound = svc.bind(host, port);
            if (bound < 0)
                throw Failure{service, "cannot listen on " + host + ":" + std::to_string(port)};
            out << ordered_json{{"listening", host}, {"port", bound}}.dump() << std::endl;
            if (!svc.run())
                throw Failure{service, "service stopped with an error"};
        } else if (replay_cmd->parsed()) {
            const auto map = resolve_map(map_path);
            const auto text = read_file(log_path);
            std::istringstream in(text);
            const auto events = read_log(in);
            print(out, report::replay(replay(map, events), compute_durations(events), Precision::fixed6));
        } else if (icc->parsed()) {
            const auto text = read_file(ratings_path);
            std::istringstream in(text);
            const auto rows = read_ratings(in);
            const auto groups = pivot_ratings(rows);
            if (groups.empty())
                throw Failure{invalid_input, ratings_path + ": no ratings"};
            std::vector<RatingsMatrix> matrices;
            for (const auto& g : groups)
                matrices.push_back(g.matrix);
            const double alpha = 1.0 - confidence;
            const auto outcomes = icc_batch_serial(matrices, alpha);
            if (std::none_of(outcomes.begin(), outcomes.end(), [](const ICCOutcome& o) { return o.result.has_value(); }))
                throw Failure{analysis, outcomes.front().error};
            print(out, report::analysis(rows, groups, outcomes, alpha));
        } else if (dur->parsed()) {
            const auto text = read_file(log_path);
            std::istringstream in(text);
            print(out, report::durations(compute_durations(read_log(in)), Precision::fixed6));
        }
    } catch (const Failure& f) {
        err << "mam: " << f.message << '\n';
        return f.code;
    } catch (const SelectionError& e) {
        err << "mam: " << e.what() << '\n';
        return analysis;
    } catch (const InsufficientCandidates& e) {
        err << "mam: " << e.what() << '\n';
        return analysis;
    } catch (const DegenerateMatrix& e) {
        err << "mam: " << e.what() << '\n';
        return analysis;
    } catch (const std::exception& e) {
        err << "mam: " << e.what() << '\n';
        return invalid_input;
    }
    return ok;
}

} // namespace mam::cli
