#include "mam/analysis.hpp"

#include "mam/f_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mam {

RatingsMatrix::RatingsMatrix(std::size_t rows, std::size_t cols, std::vector<double> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells))
{
    if (rows_ < 2 || cols_ < 2)
        throw std::domain_error("ratings matrix needs at least 2 targets and 2 raters");
    if (cells_.size() != rows_ * cols_)
        throw std::invalid_argument("ratings matrix cell count does not match its shape");
    for (double c : cells_)
        if (!std::isfinite(c))
            throw std::domain_error("ratings matrix contains a non-finite cell");
}

std::string_view to_string(Reliability r)
{
    switch (r) {
    case Reliability::poor: return "poor";
    case Reliability::fair: return "fair";
    case Reliability::good: return "good";
    case Reliability::excellent: return "excellent";
    }
    return "?";
}

Reliability classify_cicchetti(double icc)
{
    if (std::isnan(icc))
        throw std::domain_error("classify_cicchetti: NaN");
    if (icc < 0.40)
        return Reliability::poor;
    if (icc < 0.60)
        return Reliability::fair;
    if (icc < 0.75)
        return Reliability::good;
    return Reliability::excellent;
}

MeanSquares two_way_mean_squares(const RatingsMatrix& m)
{
    const std::size_t n = m.rows(), k = m.cols();
    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            row_mean[i] += m(i, j);
            col_mean[j] += m(i, j);
            grand += m(i, j);
        }
    for (auto& r : row_mean)
        r /= static_cast<double>(k);
    for (auto& c : col_mean)
        c /= static_cast<double>(n);
    grand /= static_cast<double>(n * k);

    double ss_rows = 0.0, ss_cols = 0.0, ss_err = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        ss_rows += (row_mean[i] - grand) * (row_mean[i] - grand);
    for (std::size_t j = 0; j < k; ++j)
        ss_cols += (col_mean[j] - grand) * (col_mean[j] - grand);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            const double r = m(i, j) - row_mean[i] - col_mean[j] + grand;
            ss_err += r * r;
        }
    ss_rows *= static_cast<double>(k);
    ss_cols *= static_cast<double>(n);

    const double dn = static_cast<double>(n), dk = static_cast<double>(k);
    return {ss_rows / (dn - 1.0), ss_cols / (dk - 1.0), ss_err / ((dn - 1.0) * (dk - 1.0))};
}

namespace {

bool rows_constant(const RatingsMatrix& m)
{
    double scale = 1.0;
    for (double c : m.cells())
        scale = std::max(scale, std::abs(c));
    std::vector<double> means(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j)
            means[i] += m(i, j);
        means[i] /= static_cast<double>(m.cols());
    }
    const auto [lo, hi] = std::minmax_element(means.begin(), means.end());
    return *hi - *lo <= 1e-12 * scale;
}

bool columns_identical(const RatingsMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 1; j < m.cols(); ++j)
            if (m(i, j) != m(i, 0))
                return false;
    return true;
}

} // namespace

ICCResult icc_a_k(const RatingsMatrix& m, double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("icc_a_k: alpha must lie in (0,1)");
    if (rows_constant(m))
        throw DegenerateMatrix("icc_a_k: targets do not vary (between-target mean square is zero)");

    auto ms = two_way_mean_squares(m);
    if (columns_identical(m))
        ms.cols = ms.error = 0.0; // exact, whatever rounding the mean sums picked up
    const double n = static_cast<double>(m.rows()), k = static_cast<double>(m.cols());
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ICCResult out;
    out.alpha = alpha;
    out.ms = ms;
    out.n = m.rows();
    out.k = m.cols();
    out.icc = (ms.rows - ms.error) / (ms.rows + (ms.cols - ms.error) / n);
    out.classification = classify_cicchetti(out.icc);

    out.df1 = n - 1.0;
    out.df2 = (n - 1.0) * (k - 1.0);
    if (ms.error > 0.0) {
        out.f_value = ms.rows / ms.error;
        out.p_value = 1.0 - f_cdf(out.f_value, out.df1, out.df2);
    } else {
        out.f_value = std::numeric_limits<double>::infinity();
        out.p_value = 0.0;
    }

    if (ms.error == 0.0 && ms.cols == 0.0) {
        out.ci_low = out.ci_high = 1.0;
        return out;
    }

    // Single-measure bounds with Satterthwaite df, stepped up to k raters.
    const double single = (ms.rows - ms.error) / (ms.rows + (k - 1.0) * ms.error + k * (ms.cols - ms.error) / n);
    const double a = k * single / (n * (1.0 - single));
    const double b = 1.0 + k * single * (n - 1.0) / (n * (1.0 - single));
    const double num = a * ms.cols + b * ms.error;
    const double v = num * num
                     / ((a * ms.cols) * (a * ms.cols) / (k - 1.0)
                        + (b * ms.error) * (b * ms.error) / ((n - 1.0) * (k - 1.0)));
    if (!(v > 0.0) || !std::isfinite(v)) {
        out.ci_low = out.ci_high = nan;
        return out;
    }
    const double fl = f_quantile(1.0 - alpha / 2.0, n - 1.0, v);
    const double fu = f_quantile(1.0 - alpha / 2.0, v, n - 1.0);
    const double mix = k * ms.cols + (k * n - k - n) * ms.error;
    const double lb = n * (ms.rows - fl * ms.error) / (fl * mix + n * ms.rows);
    const double ub = n * (fu * ms.rows - ms.error) / (mix + n * fu * ms.rows);
    out.ci_low = lb * k / (1.0 + lb * (k - 1.0));
    out.ci_high = ub * k / (1.0 + ub * (k - 1.0));
    return out;
}

namespace {

ICCOutcome icc_outcome(const RatingsMatrix& m, double alpha)
{
    try {
        return {icc_a_k(m, alpha), {}};
    } catch (const std::exception& e) {
        return {std::nullopt, e.what()};
    }
}

} // namespace

std::vector<ICCOutcome> icc_batch(std::span<const RatingsMatrix> matrices, double alpha)
{
    std::vector<ICCOutcome> out(matrices.size());
    const auto n = static_cast<std::ptrdiff_t>(matrices.size());

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = icc_outcome(matrices[i], alpha);
    return out;
}

std::vector<ICCOutcome> icc_batch_serial(std::span<const RatingsMatrix> matrices, double alpha)
{
    std::vector<ICCOutcome> out;
    out.reserve(matrices.size());
    for (const auto& m : matrices)
        out.push_back(icc_outcome(m, alpha));
    return out;
}

std::vector<GroupStats> per_method_means(std::span<const MethodScores> data)
{
    std::vector<GroupStats> out;
    for (const auto& g : data) {
        if (g.scores.empty())
            throw std::domain_error("per_method_means: method '" + g.method + "' has no scores");
        double sum = 0.0;
        for (double x : g.scores)
            sum += x;
        const double n = static_cast<double>(g.scores.size());
        const double mean = sum / n;
        double ss = 0.0;
        for (double x : g.scores)
            ss += (x - mean) * (x - mean);
        out.push_back({g.method, g.scores.size(), mean, g.scores.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0});
    }
    return out;
}

std::vector<std::vector<double>> mean_difference_matrix(std::span<const MethodScores> data)
{
    if (data.size() < 2)
        throw std::domain_error("mean_difference_matrix: need at least two methods");
    const auto stats = per_method_means(data);
    std::vector<std::vector<double>> out(stats.size(), std::vector<double>(stats.size(), 0.0));
    for (std::size_t i = 0; i < stats.size(); ++i)
        for (std::size_t j = i + 1; j < stats.size(); ++j)
            out[i][j] = out[j][i] = std::abs(stats[i].mean - stats[j].mean);
    return out;
}

} // namespace mam
