#pragma once

#include "mam/analysis.hpp"
#include "mam/stimulus_selection.hpp"

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mam {

class TableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Comma-separated corpus with header `id,valence,arousal,usable`.
/// usable accepts true/false/1/0/yes/no.
std::vector<StimulusRecord> read_corpus(std::istream& in);

struct RatingRow {
    std::string dimension; // optional column, e.g. valence / arousal
    std::string stimulus;  // optional column
    std::string target_id;
    std::string method;
    double score = 0.0;
};

/// Comma-separated ratings; header must name `target_id`, `method`, `score`
/// and may add `stimulus` and `dimension`, in any column order.
std::vector<RatingRow> read_ratings(std::istream& in);

/// One (dimension, stimulus) slice pivoted to targets x methods.
struct RatingGroup {
    std::string dimension;
    std::string stimulus;
    std::vector<std::string> targets;
    std::vector<std::string> methods;
    RatingsMatrix matrix;
};

/// Groups rows by (dimension, stimulus) in first-appearance order. Every
/// group must be complete: each target rated exactly once by each method.
std::vector<RatingGroup> pivot_ratings(const std::vector<RatingRow>& rows);

} // namespace mam
