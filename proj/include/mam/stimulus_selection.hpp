#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mam {

/// One annotated clip. Scores are on the 1..9 scale.
struct StimulusRecord {
    std::string id;
    double valence_raw = 5.0;
    double arousal_raw = 5.0;
    bool usable = true;
};

enum class Quadrant { q1, q2, q3, q4, boundary };

std::string_view to_string(Quadrant q);

/// Sign rule on centered scores: Q1 (+,+), Q2 (-,+), Q3 (-,-), Q4 (+,-).
/// A zero component puts the point on a boundary.
Quadrant quadrant_of(double v_centered, double a_centered);

/// Raised when a category cannot be filled; names the quadrant or category.
class InsufficientCandidates : public std::runtime_error {
public:
    InsufficientCandidates(std::string category, const std::string& detail);
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

struct ExtremesPick {
    std::string strong;
    std::string weak;
};

/// Per quadrant, the clips farthest from and nearest to the neutral origin.
std::array<ExtremesPick, 4> select_extremes(std::span<const StimulusRecord> corpus);

/// Per quadrant, the clip whose |V/A| ratio is closest to 1.
std::array<std::string, 4> select_balanced(std::span<const StimulusRecord> corpus);

struct NeutralPick {
    std::vector<std::string> valence; // smallest |V|, i.e. V/A -> 0
    std::vector<std::string> arousal; // smallest |A|, i.e. V/A -> infinity
};

NeutralPick select_neutral(std::span<const StimulusRecord> corpus, std::size_t per_axis = 2);

enum class Category { extremes, balanced, neutral };

std::string_view to_string(Category c);
Category category_from_string(std::string_view s);

struct SelectionConfig {
    /// Earlier categories keep a contested clip; later ones take their next candidate.
    std::array<Category, 3> order{Category::extremes, Category::balanced, Category::neutral};
    std::size_t neutral_valence = 2;
    std::size_t neutral_arousal = 2;
};

struct SlotAudit {
    std::string slot;
    Category category = Category::extremes;
    std::vector<std::string> ranked; // all candidates, best first
    std::string chosen;              // empty if unfillable
    std::size_t chosen_rank = 0;
};

struct Promotion {
    std::string slot;
    std::string skipped;
    std::string held_by;
};

struct QuadrantPick {
    std::string strong;
    std::string weak;
    std::string balanced;
};

struct SelectionResult {
    std::array<QuadrantPick, 4> quadrants;
    std::vector<std::string> neutral_valence;
    std::vector<std::string> neutral_arousal;
    std::vector<SlotAudit> slots;       // in precedence order
    std::vector<Promotion> promotions;  // every second-place substitution
    bool order_sensitive = false;       // another category order would change the outcome

    std::vector<std::string> ids() const;
};

class SelectionError : public std::runtime_error {
public:
    explicit SelectionError(std::vector<std::string> unfilled);
    const std::vector<std::string>& unfilled() const { return unfilled_; }

private:
    std::vector<std::string> unfilled_;
};

/// Fills every slot in precedence order, handing each slot its best candidate
/// not already taken. Throws SelectionError listing unfillable slots.
SelectionResult select_protocol(std::span<const StimulusRecord> corpus, const SelectionConfig& config = {});

} // namespace mam
