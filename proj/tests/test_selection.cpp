#include "oracles.hpp"

#include "mam/stimulus_selection.hpp"

#include <doctest.h>

#include <set>

using namespace mam;

namespace {

// Centered coordinates + 5 give the raw 1..9 scores.
StimulusRecord rec(std::string id, double v, double a, bool usable = true)
{
    return {std::move(id), v + 5.0, a + 5.0, usable};
}

std::vector<StimulusRecord> clean_corpus()
{
    return {
        rec("q1s", 4, 1),     rec("q1w", 0.5, 1.5),   rec("q1b", 2.2, 2),
        rec("q2s", -4, 1),    rec("q2w", -0.5, 1.5),  rec("q2b", -2, 2),
        rec("q3s", -4, -1),   rec("q3w", -0.5, -1.5), rec("q3b", -2, -2),
        rec("q4s", 4, -1),    rec("q4w", 0.5, -1.5),  rec("q4b", 2, -2),
        rec("nv1", 0, 3),     rec("nv2", 0, -3.5),    rec("na1", 3, 0),
        rec("na2", -2.5, 0),
    };
}

std::map<std::string, std::string> slots_of(const SelectionResult& r)
{
    std::map<std::string, std::string> m;
    for (const auto& s : r.slots)
        m[s.slot] = s.chosen;
    return m;
}

std::vector<std::string> names(const SelectionConfig& c)
{
    std::vector<std::string> out;
    for (auto k : c.order)
        out.emplace_back(to_string(k));
    return out;
}

} // namespace

TEST_CASE("quadrant sign rule")
{
    CHECK(quadrant_of(2, 3) == Quadrant::q1);
    CHECK(quadrant_of(-1, 2) == Quadrant::q2);
    CHECK(quadrant_of(-1, -0.5) == Quadrant::q3);
    CHECK(quadrant_of(1, -0.5) == Quadrant::q4);
    CHECK(quadrant_of(0, 2) == Quadrant::boundary);
    CHECK(quadrant_of(2, 0) == Quadrant::boundary);
}

TEST_CASE("extremes per quadrant")
{
    auto corpus = clean_corpus();
    const auto picks = select_extremes(corpus);
    CHECK(picks[0].strong == "q1s");
    CHECK(picks[0].weak == "q1w");
    CHECK(picks[2].strong == "q3s");
    CHECK(picks[2].weak == "q3w");

    SUBCASE("ties go to the smaller id")
    {
        corpus.push_back(rec("a_far", 1, 4)); // same distance as q1s
        corpus.push_back(rec("z_far", 4, 1));
        CHECK(select_extremes(corpus)[0].strong == "a_far");
    }
    SUBCASE("a quadrant with a single clip")
    {
        std::erase_if(corpus, [](const StimulusRecord& r) { return r.id == "q2s" || r.id == "q2w"; });
        try {
            select_extremes(corpus);
            FAIL("expected an error");
        } catch (const InsufficientCandidates& e) {
            CHECK(e.category() == "Q2");
        }
    }
}

TEST_CASE("balanced ratio")
{
    std::vector<StimulusRecord> corpus{rec("r05", 1, 2), rec("r11", 2.2, 2), rec("r30", 3, 1)};
    for (int q = 2; q <= 4; ++q) {
        const double sv = q == 2 || q == 3 ? -1 : 1, sa = q >= 3 ? -1 : 1;
        corpus.push_back(rec("x" + std::to_string(q), sv * 2, sa * 2));
    }
    const auto picks = select_balanced(corpus);
    CHECK(picks[0] == "r11");
    CHECK(picks[1] == "x2");
    CHECK(picks[2] == "x3");

    // opposite signs: equal magnitudes are balanced, not near-zero valence
    std::vector<StimulusRecord> q2{rec("even", -2, 2), rec("flat", -0.2, 2), rec("q1", 1, 1), rec("q3", -1, -1),
                                   rec("q4", 1, -1)};
    CHECK(select_balanced(q2)[1] == "even");

    corpus.push_back(rec("axis", 3, 0));
    CHECK(select_balanced(corpus)[0] == "r11");
}

TEST_CASE("neutral picks")
{
    std::vector<StimulusRecord> corpus{rec("a", 0.1, 3), rec("b", 0.4, -2), rec("c", 2.0, 1.5), rec("d", -3, 0)};
    const auto n = select_neutral(corpus);
    CHECK(n.valence == std::vector<std::string>{"a", "b"});
    CHECK(n.arousal.front() == "d");
}

TEST_CASE("no conflicts: protocol equals the per-category picks")
{
    const auto corpus = clean_corpus();
    const auto r = select_protocol(corpus);
    CHECK(r.promotions.empty());
    CHECK_FALSE(r.order_sensitive);
    for (int q = 0; q < 4; ++q) {
        const std::string p = "q" + std::to_string(q + 1);
        CHECK(r.quadrants[q].strong == p + "s");
        CHECK(r.quadrants[q].weak == p + "w");
        CHECK(r.quadrants[q].balanced == p + "b");
    }
    CHECK(r.neutral_valence == std::vector<std::string>{"nv1", "nv2"});
    CHECK(r.neutral_arousal == std::vector<std::string>{"na1", "na2"});
    const auto ids = r.ids();
    CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 16);
}

TEST_CASE("a clip first in two categories goes to the earlier one")
{
    SUBCASE("weakest and balanced")
    {
        auto corpus = clean_corpus();
        corpus.push_back(rec("q1y", 0.25, 0.25));
        const auto r = select_protocol(corpus);
        CHECK(r.quadrants[0].weak == "q1y");
        CHECK(r.quadrants[0].balanced == "q1b");
        REQUIRE(r.promotions.size() == 1);
        CHECK(r.promotions[0].slot == "Q1.balanced");
        CHECK(r.promotions[0].skipped == "q1y");
        CHECK(r.promotions[0].held_by == "Q1.weak");
        CHECK(r.order_sensitive);

        const auto& audit = r.slots[8]; // Q1.balanced follows the eight extremes slots
        CHECK(audit.slot == "Q1.balanced");
        CHECK(audit.ranked.front() == "q1y");
        CHECK(audit.chosen_rank == 1);
    }
    SUBCASE("strongest and balanced, precedence reversed")
    {
        auto corpus = clean_corpus();
        corpus.push_back(rec("q1x", 4, 4));
        SelectionConfig cfg;
        CHECK(select_protocol(corpus, cfg).quadrants[0].strong == "q1x");
        cfg.order = {Category::balanced, Category::extremes, Category::neutral};
        const auto r = select_protocol(corpus, cfg);
        CHECK(r.quadrants[0].balanced == "q1x");
        CHECK(r.quadrants[0].strong == "q1s");
        REQUIRE(r.promotions.size() == 1);
        CHECK(r.promotions[0].slot == "Q1.strong");
        CHECK(r.promotions[0].held_by == "Q1.balanced");
    }
}

TEST_CASE("unusable clips are never selected")
{
    auto corpus = clean_corpus();
    corpus.push_back(rec("bad", 4.5, 4.5, false));
    corpus.push_back(rec("bad0", 0, 0, false));
    const auto ids = select_protocol(corpus).ids();
    CHECK(std::find(ids.begin(), ids.end(), "bad") == ids.end());
    CHECK(std::find(ids.begin(), ids.end(), "bad0") == ids.end());
}

TEST_CASE("unfillable slots are listed")
{
    auto corpus = clean_corpus();
    std::erase_if(corpus, [](const StimulusRecord& r) { return r.id.starts_with("q4"); });
    try {
        select_protocol(corpus);
        FAIL("expected an error");
    } catch (const SelectionError& e) {
        CHECK(e.unfilled() == std::vector<std::string>{"Q4.strong", "Q4.weak", "Q4.balanced"});
    }
}

TEST_CASE("bad inputs")
{
    auto corpus = clean_corpus();
    corpus.push_back(corpus.front());
    CHECK_THROWS_AS(select_protocol(corpus), std::invalid_argument);
    SelectionConfig cfg;
    cfg.order = {Category::balanced, Category::balanced, Category::neutral};
    CHECK_THROWS_AS(select_protocol(clean_corpus(), cfg), std::invalid_argument);
}

TEST_CASE("randomised corpora match the brute-force oracle")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> size(16, 60);
    std::array<Category, 3> order{Category::balanced, Category::extremes, Category::neutral};
    std::size_t succeeded = 0, promoted = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto corpus = oracle::random_corpus(rng, size(rng));
        std::next_permutation(order.begin(), order.end());
        SelectionConfig cfg;
        cfg.order = order;
        const auto want = oracle::select(corpus, names(cfg));
        CAPTURE(trial);
        if (!want) {
            CHECK_THROWS_AS(select_protocol(corpus, cfg), SelectionError);
            continue;
        }
        const auto got = select_protocol(corpus, cfg);
        CHECK(slots_of(got) == want->slots);
        const auto ids = got.ids();
        CHECK(std::set<std::string>(ids.begin(), ids.end()).size() == 16);
        for (const auto& id : ids)
            CHECK(std::find_if(corpus.begin(), corpus.end(),
                               [&](const StimulusRecord& r) { return r.id == id && r.usable; })
                  != corpus.end());
        CHECK(select_protocol(corpus, cfg).ids() == ids);
        ++succeeded;
        promoted += !got.promotions.empty();
    }
    CHECK(succeeded > 500);
    CHECK(promoted > 50);
}
