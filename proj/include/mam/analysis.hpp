#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mam {

/// Complete targets x raters table (rows = targets, columns = raters/methods).
class RatingsMatrix {
public:
    /// Row-major cells. Requires rows >= 2, cols >= 2 and finite cells.
    RatingsMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    std::span<const double> cells() const { return cells_; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

class DegenerateMatrix : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Reliability { poor, fair, good, excellent };

std::string_view to_string(Reliability r);

/// Cicchetti bands: < .40 poor, < .60 fair, < .75 good, otherwise excellent.
Reliability classify_cicchetti(double icc);

struct MeanSquares {
    double rows = 0.0;   // between targets
    double cols = 0.0;   // between raters
    double error = 0.0;  // residual
};

struct ICCResult {
    double icc = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double alpha = 0.05;
    Reliability classification = Reliability::poor;
    MeanSquares ms;
    std::size_t n = 0;
    std::size_t k = 0;
    double f_value = 0.0; // MS_R / MS_E
    double df1 = 0.0;
    double df2 = 0.0;
    double p_value = 0.0;
};

MeanSquares two_way_mean_squares(const RatingsMatrix& m);

/// Two-way, absolute agreement, average-measures ICC with a (1 - alpha)
/// confidence interval. Throws DegenerateMatrix when targets do not vary.
ICCResult icc_a_k(const RatingsMatrix& m, double alpha = 0.05);

/// Per-matrix result of a batch run; error holds the message when icc_a_k threw.
struct ICCOutcome {
    std::optional<ICCResult> result;
    std::string error;
};

/// Evaluates many matrices; the OpenMP kernel and serial reference must agree exactly.
std::vector<ICCOutcome> icc_batch(std::span<const RatingsMatrix> matrices, double alpha = 0.05);
std::vector<ICCOutcome> icc_batch_serial(std::span<const RatingsMatrix> matrices, double alpha = 0.05);

struct MethodScores {
    std::string method;
    std::vector<double> scores;
};

struct GroupStats {
    std::string method;
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; // sample SD
};

/// Arithmetic mean and sample SD per method. In a balanced design these are
/// the estimated marginal means.
std::vector<GroupStats> per_method_means(std::span<const MethodScores> data);

/// Symmetric matrix of |mean_i - mean_j| with a zero diagonal.
std::vector<std::vector<double>> mean_difference_matrix(std::span<const MethodScores> data);

} // namespace mam
