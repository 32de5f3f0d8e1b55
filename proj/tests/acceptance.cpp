// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "oracles.hpp"

#include "mam/analysis.hpp"
#include "mam/durations.hpp"
#include "mam/event_log.hpp"
#include "mam/f_distribution.hpp"
#include "mam/interpolation.hpp"
#include "mam/report.hpp"
#include "mam/scales.hpp"
#include "mam/session.hpp"
#include "mam/stimulus_selection.hpp"

#include <httplib.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace mam;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---- expression core ----

Outcome vertex_reproduction()
{
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto& map = default_map();
    double worst = 0.0;
    for (const auto& e : map.expressions()) {
        const double r = e.ring == Ring::center ? 0.0 : e.ring == Ring::inner ? 0.5 : 1.0;
        const auto out = interpolate(map, Cursor::make(r, e.angle_deg));
        worst = std::max({worst, out.fv.max_abs_diff(e.fv), std::abs(out.va.valence - e.va.valence),
                          std::abs(out.va.arousal - e.va.arousal)});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(worst < 1e-9, "max error " + fmt(worst));
    o.require(secs < 1.0, "took " + fmt(secs) + " s");
    o.detail = o.ok ? "9 vertices, max error " + fmt(worst) + ", " + fmt(secs * 1000) + " ms" : o.detail;
    return o;
}

double diff(const Interpolation& a, const Interpolation& b)
{
    return std::max({a.fv.max_abs_diff(b.fv), std::abs(a.va.valence - b.va.valence),
                     std::abs(a.va.arousal - b.va.arousal)});
}

Outcome continuity()
{
    Outcome o;
    // default map (seam inside a field) and a copy turned so a spoke lies on 0/360
    auto doc = nlohmann::json::parse(serialize_map(default_map()));
    for (auto& e : doc["expressions"])
        if (e.contains("angle_deg"))
            e["angle_deg"] = std::fmod(e["angle_deg"].get<double>() + 315.0, 360.0);
    const PolarMap maps[] = {default_map(), load_map(doc.dump())};

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    std::size_t boundaries = 0;
    for (const auto& map : maps) {
        const auto& f = map.fields();
        for (std::size_t s = 0; s < 4; ++s) {
            const std::size_t prev = (s + 3) % 4;
            const double phi = f[s].phi_start;
            for (int band = 0; band < 2; ++band) {
                for (int i = 0; i < 1000; ++i) {
                    const double r = band == 0 ? 0.5 * u(rng) : 0.5 + 0.5 * u(rng);
                    const Cursor c = Cursor::make(r, phi);
                    worst = std::max(worst, diff(evaluate_field(map, f[4 * band + s], c),
                                                 evaluate_field(map, f[4 * band + prev], c)));
                }
                ++boundaries;
            }
            for (int i = 0; i < 1000; ++i) {
                const Cursor c = Cursor::make(0.5, f[s].phi_start + 90.0 * u(rng));
                worst = std::max(worst, diff(evaluate_field(map, f[s], c), evaluate_field(map, f[4 + s], c)));
            }
            ++boundaries;
        }
        for (int i = 0; i < 1000; ++i) {
            const double r = u(rng);
            worst = std::max(worst, diff(interpolate(map, Cursor::make(r, 0.0)),
                                         interpolate(map, Cursor::make(r, std::nextafter(360.0, 0.0)))));
        }
        ++boundaries;
    }
    o.require(worst < 1e-9, "max jump " + fmt(worst));
    if (o.ok)
        o.detail = std::to_string(boundaries) + " boundaries x 1000 points, max jump " + fmt(worst);
    return o;
}

Outcome oracle_equivalence()
{
    Outcome o;
    const auto& map = default_map();
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> r01(0.0, 1.0), deg(0.0, 360.0);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double r = r01(rng), phi = deg(rng);
        const auto got = interpolate(map, Cursor::make(r, phi));
        const auto want = oracle::interpolate(map, r, phi);
        for (std::size_t j = 0; j < want.fv.size(); ++j)
            worst = std::max(worst, std::abs(got.fv[j] - want.fv[j]));
        worst = std::max({worst, std::abs(got.va.valence - want.valence), std::abs(got.va.arousal - want.arousal)});
    }
    o.require(worst < 1e-12, "max deviation " + fmt(worst));
    if (o.ok)
        o.detail = "10000 cursors, max deviation " + fmt(worst);
    return o;
}

Outcome radius_recompute()
{
    Outcome o;
    o.require(radius_rescale(0.25) == 0.5, "R(0.25)");
    o.require(radius_rescale(0.5) == 1.0, "R(0.5)");
    o.require(radius_rescale(0.75) == 0.5, "R(0.75)");
    if (o.ok)
        o.detail = "R(0.25)=0.5, R(0.5)=1, R(0.75)=0.5 exactly";
    return o;
}

Outcome scale_conversion()
{
    Outcome o;
    o.require(sam9_to_5(1) == 1.0 && sam9_to_5(5) == 3.0 && sam9_to_5(9) == 5.0, "(1,5,9) -> (1,3,5)");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, 9.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double x = u(rng);
        worst = std::max(worst, std::abs(five_to_sam9(sam9_to_5(x)) - x));
    }
    o.require(worst < 1e-12, "round trip error " + fmt(worst));
    if (o.ok)
        o.detail = "(1,5,9) -> (1,3,5) exactly, round trip max error " + fmt(worst);
    return o;
}

// ---- selection ----

Outcome stimulus_selection()
{
    Outcome o;
    std::mt19937_64 rng(777);
    std::uniform_int_distribution<std::size_t> size(16, 60);
    const char* orders[6][3] = {{"extremes", "balanced", "neutral"}, {"extremes", "neutral", "balanced"},
                                {"balanced", "extremes", "neutral"}, {"balanced", "neutral", "extremes"},
                                {"neutral", "extremes", "balanced"}, {"neutral", "balanced", "extremes"}};
    std::size_t ok = 0, failed_both = 0;
    for (int trial = 0; trial < 1000 && o.ok; ++trial) {
        const auto corpus = oracle::random_corpus(rng, size(rng));
        const auto& ord = orders[trial % 6];
        SelectionConfig cfg;
        for (int i = 0; i < 3; ++i)
            cfg.order[i] = category_from_string(ord[i]);
        const auto want = oracle::select(corpus, {ord[0], ord[1], ord[2]});
        try {
            const auto got = select_protocol(corpus, cfg);
            o.require(want.has_value(), "trial " + std::to_string(trial) + ": oracle found no selection");
            if (!want)
                break;
            std::map<std::string, std::string> slots;
            for (const auto& s : got.slots)
                slots[s.slot] = s.chosen;
            o.require(slots == want->slots, "trial " + std::to_string(trial) + ": slot assignment differs");
            const auto ids = got.ids();
            o.require(std::set<std::string>(ids.begin(), ids.end()).size() == 16,
                      "trial " + std::to_string(trial) + ": duplicate ids");
            ++ok;
        } catch (const SelectionError&) {
            o.require(!want.has_value(), "trial " + std::to_string(trial) + ": engine failed, oracle succeeded");
            ++failed_both;
        }
    }

    // constructed conflict: q1y is both the weakest Q1 clip and the best balanced one
    auto rec = [](std::string id, double v, double a) { return StimulusRecord{std::move(id), v + 5, a + 5, true}; };
    const std::vector<StimulusRecord> conflict{
        rec("q1s", 4, 1),   rec("q1w", 0.5, 1.5),   rec("q1b", 2.2, 2),  rec("q1y", 0.25, 0.25),
        rec("q2s", -4, 1),  rec("q2w", -0.5, 1.5),  rec("q2b", -2, 2),   rec("q3s", -4, -1),
        rec("q3w", -0.5, -1.5), rec("q3b", -2, -2), rec("q4s", 4, -1),   rec("q4w", 0.5, -1.5),
        rec("q4b", 2, -2),  rec("nv1", 0, 3),       rec("nv2", 0, -3.5), rec("na1", 3, 0),
        rec("na2", -2.5, 0)};
    const auto r = select_protocol(conflict);
    const bool audited = r.quadrants[0].weak == "q1y" && r.quadrants[0].balanced == "q1b" && r.promotions.size() == 1
                         && r.promotions[0].slot == "Q1.balanced" && r.promotions[0].skipped == "q1y"
                         && r.promotions[0].held_by == "Q1.weak";
    o.require(audited, "conflict corpus: second-placed candidate not chosen or not audited");
    if (o.ok)
        o.detail = "1000 corpora match the oracle (" + std::to_string(ok) + " selected, " + std::to_string(failed_both)
                   + " unfillable in both), 16 distinct ids each; conflict promotion audited";
    return o;
}

// ---- analysis ----

Outcome icc()
{
    Outcome o;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> n(2, 40), k(2, 6);
    std::normal_distribution<double> z(0, 1);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rows = n(rng), cols = k(rng);
        std::vector<std::vector<double>> x(rows, std::vector<double>(cols));
        std::vector<double> cells;
        for (auto& row : x) {
            const double t = 1.5 * z(rng);
            for (auto& c : row) {
                c = 3 + t + z(rng);
                cells.push_back(c);
            }
        }
        const auto got = icc_a_k(RatingsMatrix(rows, cols, cells));
        worst = std::max(worst, std::abs(got.icc - oracle::icc_components(x).icc));
    }
    o.require(worst < 1e-9, "max deviation from oracle " + fmt(worst));
    const auto perfect = icc_a_k(RatingsMatrix(3, 3, {1, 1, 1, 4, 4, 4, 2, 2, 2}));
    o.require(perfect.icc == 1.0, "perfect agreement gave " + fmt(perfect.icc));
    o.require(classify_cicchetti(0.859) == Reliability::excellent, "0.859 not excellent");
    o.require(classify_cicchetti(0.628) == Reliability::good, "0.628 not good");
    const double q = f_quantile(0.95, 1, 10);
    o.require(std::abs(q - 4.9646) <= 1e-3, "f_quantile(0.95,1,10) = " + fmt(q));
    if (o.ok)
        o.detail = "100 matrices max deviation " + fmt(worst) + "; perfect agreement 1; 0.859 excellent, 0.628 good; "
                   "F(0.95;1,10) = " + std::to_string(q);
    return o;
}

// ---- session ----

Outcome session_protocol()
{
    Outcome o;
    const auto& map = default_map();

    // golden log
    const std::filesystem::path data = MAM_SOURCE_DIR "/tests/data";
    const auto events = read_log(data / "golden.log");
    const auto report = report::replay(replay(map, events), compute_durations(events), report::Precision::fixed6);
    o.require(report.dump(2) + "\n" == slurp(data / "golden_replay.json"), "golden replay differs");

    // fuzzed mode protection
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> type(0, 8), method(0, 3);
    std::uniform_real_distribution<double> r01(0, 1), deg(0, 360), score(1, 5);
    std::size_t view_moves = 0;
    for (int seq = 0; seq < 10000 && o.ok; ++seq) {
        SessionState s;
        for (int i = 0; i < 16; ++i) {
            RatingEvent e;
            e.session_id = "fuzz";
            e.stimulus_id = "clip" + std::to_string(i % 3);
            e.event_type = static_cast<EventType>(type(rng));
            e.method = static_cast<Method>(method(rng));
            e.t_mono = i;
            if (e.event_type == EventType::move)
                e.payload.cursor = Cursor::make(r01(rng), deg(rng));
            if (e.event_type == EventType::confirm && e.method != Method::mam)
                e.payload.va = VAScore{score(rng), score(rng)};
            const auto t = handle_event(map, s, e);
            if (s.mode == Mode::view && e.event_type == EventType::move) {
                ++view_moves;
                o.require(t.state == s, "view-mode move changed state in sequence " + std::to_string(seq));
            }
            if (e.event_type != EventType::confirm && e.event_type != EventType::stimulus_start)
                o.require(t.state.committed == s.committed, "commit changed outside confirm");
            s = t.state;
        }
    }

    // 24.744 s gap
    RatingEvent a;
    a.session_id = "s";
    a.stimulus_id = "c";
    a.method = Method::mam;
    a.event_type = EventType::rating_shown;
    a.t_mono = 1000;
    auto b = a;
    b.event_type = EventType::confirm;
    b.t_mono = 25744;
    const std::vector<RatingEvent> pair{a, b};
    const auto d = compute_durations(pair);
    o.require(d.ratings.size() == 1 && d.ratings[0].seconds == 24.744 && d.per_mode.at(RatingMode::vrr).mean == 24.744,
              "constructed gap not reported as exactly 24.744 s");
    if (o.ok)
        o.detail = "golden replay byte-exact; 10000 fuzzed sequences (" + std::to_string(view_moves)
                   + " view-mode moves) left state untouched; 24.744 s gap exact";
    return o;
}

// ---- CLI ----

struct Proc {
    int code;
    std::string out;
    std::string err;
};

std::string quote(const std::string& s)
{
    std::string q = "'";
    for (char c : s)
        q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

Proc run_cli(const std::vector<std::string>& args, const std::filesystem::path& scratch)
{
    std::string cmd = quote(MAM_CLI_PATH);
    for (const auto& a : args)
        cmd += " " + quote(a);
    const auto out = scratch / "stdout", err = scratch / "stderr";
    cmd += " > " + quote(out.string()) + " 2> " + quote(err.string());
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

int free_port()
{
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    return ntohs(addr.sin_port);
}

/// Scripted serve session; returns the transcript (stdout, responses, logs).
std::string serve_transcript(const std::filesystem::path& scratch, int port, std::string& problem)
{
    const auto logs = scratch / "serve-logs";
    std::filesystem::remove_all(logs);
    const std::string cmd = quote(MAM_CLI_PATH) + " serve --port " + std::to_string(port) + " --log-dir "
                            + quote(logs.string()) + " 2> " + quote((scratch / "serve-err").string());
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) {
        problem = "cannot start serve";
        return {};
    }
    std::string transcript;
    char line[256];
    if (!std::fgets(line, sizeof line, p)) {
        problem = "serve printed nothing";
        ::pclose(p);
        return {};
    }
    transcript += line;

    httplib::Client c("127.0.0.1", port);
    auto post = [&](const std::string& path, const nlohmann::ordered_json& body) {
        auto res = c.Post(path, body.dump(), "application/json");
        transcript += path + " -> " + (res ? std::to_string(res->status) + " " + res->body : "no response\n");
    };
    post("/sessions", {{"subject_id", "p01"}, {"method", "MAM"}});
    post("/sessions", {{"subject_id", "p02"}, {"method", "SAM_VR"}, {"session_id", "vr"}});
    std::int64_t t = 0;
    auto event = [&](const std::string& sid, nlohmann::ordered_json e) {
        t += 250;
        e["t_mono"] = t;
        e["t_wall"] = "2019-11-04T10:00:00.000Z";
        post("/sessions/" + sid + "/events", e);
    };
    for (int k = 0; k < 3; ++k) {
        const std::string stim = "clip" + std::to_string(k);
        event("s0001", {{"event_type", "stimulus_start"}, {"stimulus_id", stim}});
        event("s0001", {{"event_type", "rating_shown"}});
        event("s0001", {{"event_type", "trigger_press"}});
        event("s0001", {{"event_type", "move"}, {"payload", {{"cursor", {{"r", 0.3 + 0.2 * k}, {"phi", 100.0 * k}}}}}});
        event("s0001", {{"event_type", "trigger_press"}}); // rejected
        event("s0001", {{"event_type", "trigger_release"}});
        event("s0001", {{"event_type", "confirm"}});
        event("vr", {{"event_type", "stimulus_start"}, {"stimulus_id", stim}});
        event("vr", {{"event_type", "rating_shown"}});
        event("vr", {{"event_type", "confirm"}, {"payload", {{"va", {{"valence", 2.0 + k}, {"arousal", 3.5}}}}}});
    }
    post("/interp", {{"r", 0.4}, {"phi", 33.0}});
    if (auto res = c.Get("/sessions/s0001"))
        transcript += res->body;
    post("/sessions/s0001/finalize", nlohmann::ordered_json::object());
    post("/sessions/vr/finalize", nlohmann::ordered_json::object());
    post("/shutdown", nlohmann::ordered_json::object());

    while (std::fgets(line, sizeof line, p))
        transcript += line;
    const int status = ::pclose(p);
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
        problem = "serve exited with status " + std::to_string(status);
    if (const auto err = slurp(scratch / "serve-err"); !err.empty())
        problem = "serve wrote to stderr: " + err.substr(0, err.find('\n'));
    for (const char* f : {"s0001.ndjson", "vr.ndjson"})
        transcript += slurp(logs / f);
    return transcript;
}

Outcome cli_determinism()
{
    Outcome o;
    const auto scratch = std::filesystem::temp_directory_path() / ("mam-acceptance-" + std::to_string(::getpid()));
    std::filesystem::create_directories(scratch);
    const std::string data = MAM_SOURCE_DIR "/tests/data/";
    const std::vector<std::vector<std::string>> cmds{
        {"interp", "--r", "0", "--phi", "120"},
        {"interp", "--r", "0.62", "--phi", "211.5"},
        {"validate-map", MAM_SOURCE_DIR "/data/default_map.json"},
        {"select-stimuli", data + "corpus.csv"},
        {"replay", data + "golden.log"},
        {"icc", data + "ratings.csv"},
        {"durations", data + "golden.log"},
    };
    for (const auto& c : cmds) {
        const auto a = run_cli(c, scratch), b = run_cli(c, scratch);
        o.require(a.code == 0, c[0] + " exited " + std::to_string(a.code));
        o.require(a.err.empty(), c[0] + " wrote to stderr on success");
        o.require(!a.out.empty() && a.out == b.out, c[0] + " output differs between runs");
    }
    const auto bad = run_cli({"validate-map", data + "bad_map_duplicate.json"}, scratch),
               bad2 = run_cli({"validate-map", data + "bad_map_duplicate.json"}, scratch);
    o.require(bad.code != 0 && bad.err.find("duplicate-name") != std::string::npos && bad.err == bad2.err,
              "validate-map on a duplicate-name map");
    o.require(run_cli({"replay", data + "golden.log"}, scratch).out == slurp(data + "golden_replay.json"),
              "replay differs from the golden report");

    const int port = free_port();
    std::string problem;
    const auto s1 = serve_transcript(scratch, port, problem);
    const auto s2 = serve_transcript(scratch, port, problem);
    o.require(problem.empty(), problem);
    o.require(!s1.empty() && s1 == s2, "serve transcript differs between runs");
    std::filesystem::remove_all(scratch);
    if (o.ok)
        o.detail = std::to_string(cmds.size() + 2) + " command lines and a scripted serve session byte-identical "
                   "across two runs; built without the face UI";
    return o;
}

} // namespace

int main()
{
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"vertex-reproduction", vertex_reproduction},
        {"continuity", continuity},
        {"oracle-equivalence", oracle_equivalence},
        {"radius-recompute", radius_recompute},
        {"scale-conversion", scale_conversion},
        {"stimulus-selection", stimulus_selection},
        {"icc", icc},
        {"session-protocol", session_protocol},
        {"cli-determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += !o.ok;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
              << std::endl;
    return failed ? 1 : 0;
}
