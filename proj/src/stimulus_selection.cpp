#include "mam/stimulus_selection.hpp"

#include "mam/scales.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace mam {

std::string_view to_string(Quadrant q)
{
    switch (q) {
    case Quadrant::q1: return "Q1";
    case Quadrant::q2: return "Q2";
    case Quadrant::q3: return "Q3";
    case Quadrant::q4: return "Q4";
    case Quadrant::boundary: return "boundary";
    }
    return "?";
}

Quadrant quadrant_of(double v, double a)
{
    if (v == 0.0 || a == 0.0 || std::isnan(v) || std::isnan(a))
        return Quadrant::boundary;
    if (a > 0.0)
        return v > 0.0 ? Quadrant::q1 : Quadrant::q2;
    return v < 0.0 ? Quadrant::q3 : Quadrant::q4;
}

std::string_view to_string(Category c)
{
    switch (c) {
    case Category::extremes: return "extremes";
    case Category::balanced: return "balanced";
    case Category::neutral: return "neutral";
    }
    return "?";
}

Category category_from_string(std::string_view s)
{
    if (s == "extremes") return Category::extremes;
    if (s == "balanced") return Category::balanced;
    if (s == "neutral") return Category::neutral;
    throw std::invalid_argument("unknown selection category '" + std::string(s) + "'");
}

InsufficientCandidates::InsufficientCandidates(std::string category, const std::string& detail)
    : std::runtime_error("insufficient candidates for " + category + ": " + detail), category_(std::move(category))
{
}

SelectionError::SelectionError(std::vector<std::string> unfilled)
    : std::runtime_error([&] {
          std::string msg = "unfillable slots:";
          for (const auto& s : unfilled)
              msg += " " + s;
          return msg;
      }()),
      unfilled_(std::move(unfilled))
{
}

std::vector<std::string> SelectionResult::ids() const
{
    std::vector<std::string> out;
    for (const auto& q : quadrants) {
        out.push_back(q.strong);
        out.push_back(q.weak);
        out.push_back(q.balanced);
    }
    out.insert(out.end(), neutral_valence.begin(), neutral_valence.end());
    out.insert(out.end(), neutral_arousal.begin(), neutral_arousal.end());
    return out;
}

namespace {

struct Centered {
    const StimulusRecord* rec;
    double v;
    double a;
    Quadrant quadrant;
};

std::vector<Centered> center_usable(std::span<const StimulusRecord> corpus)
{
    std::vector<Centered> out;
    for (const auto& r : corpus) {
        if (!r.usable)
            continue;
        const double v = center_deap(r.valence_raw);
        const double a = center_deap(r.arousal_raw);
        out.push_back({&r, v, a, quadrant_of(v, a)});
    }
    return out;
}

using Key = std::function<double(const Centered&)>;

/// Ids ordered by ascending key, ties by id.
std::vector<std::string> rank(const std::vector<Centered>& pool, const std::function<bool(const Centered&)>& keep,
                              const Key& key)
{
    std::vector<const Centered*> sel;
    for (const auto& c : pool)
        if (keep(c))
            sel.push_back(&c);
    std::sort(sel.begin(), sel.end(), [&](const Centered* x, const Centered* y) {
        const double kx = key(*x), ky = key(*y);
        if (kx != ky)
            return kx < ky;
        return x->rec->id < y->rec->id;
    });
    std::vector<std::string> ids;
    ids.reserve(sel.size());
    for (const auto* c : sel)
        ids.push_back(c->rec->id);
    return ids;
}

double distance(const Centered& c) { return std::hypot(c.v, c.a); }
// magnitude ratio: in Q2/Q4 the signed ratio is negative and would favour near-zero valence
double balance_deviation(const Centered& c) { return std::abs(std::abs(c.v / c.a) - 1.0); }

std::function<bool(const Centered&)> in_quadrant(Quadrant q)
{
    return [q](const Centered& c) { return c.quadrant == q; };
}

constexpr Quadrant all_quadrants[4] = {Quadrant::q1, Quadrant::q2, Quadrant::q3, Quadrant::q4};

std::vector<std::string> ranked_strong(const std::vector<Centered>& pool, Quadrant q)
{
    return rank(pool, in_quadrant(q), [](const Centered& c) { return -distance(c); });
}

std::vector<std::string> ranked_weak(const std::vector<Centered>& pool, Quadrant q)
{
    return rank(pool, in_quadrant(q), distance);
}

std::vector<std::string> ranked_balanced(const std::vector<Centered>& pool, Quadrant q)
{
    return rank(pool, [q](const Centered& c) { return c.quadrant == q && c.a != 0.0; }, balance_deviation);
}

std::vector<std::string> ranked_neutral_valence(const std::vector<Centered>& pool)
{
    return rank(pool, [](const Centered&) { return true; }, [](const Centered& c) { return std::abs(c.v); });
}

std::vector<std::string> ranked_neutral_arousal(const std::vector<Centered>& pool)
{
    return rank(pool, [](const Centered&) { return true; }, [](const Centered& c) { return std::abs(c.a); });
}

struct PendingSlot {
    std::string name;
    Category category;
    std::vector<std::string> ranked;
};

std::vector<PendingSlot> slots_for(const std::vector<Centered>& pool, Category cat, const SelectionConfig& cfg)
{
    std::vector<PendingSlot> out;
    switch (cat) {
    case Category::extremes:
        for (auto q : all_quadrants) {
            const std::string qn(to_string(q));
            out.push_back({qn + ".strong", cat, ranked_strong(pool, q)});
            out.push_back({qn + ".weak", cat, ranked_weak(pool, q)});
        }
        break;
    case Category::balanced:
        for (auto q : all_quadrants)
            out.push_back({std::string(to_string(q)) + ".balanced", cat, ranked_balanced(pool, q)});
        break;
    case Category::neutral: {
        const auto nv = ranked_neutral_valence(pool);
        const auto na = ranked_neutral_arousal(pool);
        for (std::size_t i = 0; i < cfg.neutral_valence; ++i)
            out.push_back({"neutral_valence." + std::to_string(i + 1), cat, nv});
        for (std::size_t i = 0; i < cfg.neutral_arousal; ++i)
            out.push_back({"neutral_arousal." + std::to_string(i + 1), cat, na});
        break;
    }
    }
    return out;
}

bool shares_ranking(const std::string& a, const std::string& b)
{
    const auto head = a.substr(0, a.find('.'));
    return head.starts_with("neutral_") && head == b.substr(0, b.find('.'));
}

struct RawSelection {
    std::vector<SlotAudit> slots;
    std::vector<Promotion> promotions;
    std::vector<std::string> unfilled;
};

RawSelection run(const std::vector<Centered>& pool, const SelectionConfig& cfg)
{
    RawSelection out;
    std::vector<std::pair<std::string, std::string>> taken; // id -> slot
    auto holder = [&](const std::string& id) -> const std::string* {
        for (const auto& [tid, slot] : taken)
            if (tid == id)
                return &slot;
        return nullptr;
    };

    for (auto cat : cfg.order) {
        for (auto& pending : slots_for(pool, cat, cfg)) {
            SlotAudit audit{pending.name, pending.category, std::move(pending.ranked), {}, 0};
            for (std::size_t k = 0; k < audit.ranked.size(); ++k) {
                const auto& id = audit.ranked[k];
                if (const auto* h = holder(id)) {
                    // neutral_valence.2 passing over neutral_valence.1's pick is just its own ranking
                    if (!shares_ranking(audit.slot, *h))
                        out.promotions.push_back({audit.slot, id, *h});
                    continue;
                }
                audit.chosen = id;
                audit.chosen_rank = k;
                taken.emplace_back(id, audit.slot);
                break;
            }
            if (audit.chosen.empty())
                out.unfilled.push_back(audit.slot);
            out.slots.push_back(std::move(audit));
        }
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> assignment(const RawSelection& raw)
{
    std::vector<std::pair<std::string, std::string>> a;
    for (const auto& s : raw.slots)
        a.emplace_back(s.slot, s.chosen);
    std::sort(a.begin(), a.end());
    return a;
}

} // namespace

std::array<ExtremesPick, 4> select_extremes(std::span<const StimulusRecord> corpus)
{
    const auto pool = center_usable(corpus);
    std::array<ExtremesPick, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto q = all_quadrants[i];
        const auto strong = ranked_strong(pool, q);
        if (strong.size() < 2)
            throw InsufficientCandidates(std::string(to_string(q)),
                                         "need 2 usable records, have " + std::to_string(strong.size()));
        out[i].strong = strong.front();
        for (const auto& id : ranked_weak(pool, q))
            if (id != out[i].strong) {
                out[i].weak = id;
                break;
            }
    }
    return out;
}

std::array<std::string, 4> select_balanced(std::span<const StimulusRecord> corpus)
{
    const auto pool = center_usable(corpus);
    std::array<std::string, 4> out;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto ranked = ranked_balanced(pool, all_quadrants[i]);
        if (ranked.empty())
            throw InsufficientCandidates(std::string(to_string(all_quadrants[i])) + ".balanced",
                                         "no usable record with nonzero arousal");
        out[i] = ranked.front();
    }
    return out;
}

NeutralPick select_neutral(std::span<const StimulusRecord> corpus, std::size_t per_axis)
{
    const auto pool = center_usable(corpus);
    if (pool.size() < per_axis)
        throw InsufficientCandidates("neutral", "need " + std::to_string(per_axis) + " usable records, have "
                                                    + std::to_string(pool.size()));
    const auto nv = ranked_neutral_valence(pool);
    const auto na = ranked_neutral_arousal(pool);
    return {{nv.begin(), nv.begin() + per_axis}, {na.begin(), na.begin() + per_axis}};
}

SelectionResult select_protocol(std::span<const StimulusRecord> corpus, const SelectionConfig& config)
{
    {
        std::set<std::string> ids;
        for (const auto& r : corpus)
            if (!ids.insert(r.id).second)
                throw std::invalid_argument("duplicate stimulus id '" + r.id + "'");
    }
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (config.order[i] == config.order[j])
                throw std::invalid_argument("category order lists a category twice");

    const auto pool = center_usable(corpus);
    auto raw = run(pool, config);
    if (!raw.unfilled.empty())
        throw SelectionError(raw.unfilled);

    SelectionResult result;
    for (const auto& s : raw.slots) {
        const auto dot = s.slot.find('.');
        const auto head = s.slot.substr(0, dot);
        const auto tail = s.slot.substr(dot + 1);
        if (head == "neutral_valence")
            result.neutral_valence.push_back(s.chosen);
        else if (head == "neutral_arousal")
            result.neutral_arousal.push_back(s.chosen);
        else {
            auto& q = result.quadrants[static_cast<std::size_t>(head[1] - '1')];
            (tail == "strong" ? q.strong : tail == "weak" ? q.weak : q.balanced) = s.chosen;
        }
    }

    const auto mine = assignment(raw);
    auto order = config.order;
    std::sort(order.begin(), order.end());
    do {
        if (order == config.order)
            continue;
        auto alt_cfg = config;
        alt_cfg.order = order;
        const auto alt = run(pool, alt_cfg);
        if (!alt.unfilled.empty() || assignment(alt) != mine) {
            result.order_sensitive = true;
            break;
        }
    } while (std::next_permutation(order.begin(), order.end()));

    result.slots = std::move(raw.slots);
    result.promotions = std::move(raw.promotions);
    return result;
}

} // namespace mam
