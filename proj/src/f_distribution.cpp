#include "mam/f_distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mam {

namespace {

constexpr double tiny = 1e-300;
constexpr int max_iterations = 20000;

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x)
{
    const double eps = std::numeric_limits<double>::epsilon();
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) <= eps)
            return h;
    }
    return h;
}

void check_df(double df1, double df2)
{
    if (!(df1 > 0.0) || !(df2 > 0.0) || !std::isfinite(df1) || !std::isfinite(df2))
        throw std::domain_error("F distribution: degrees of freedom must be positive and finite");
}

// Smallest y in [0,1] with g(y) >= target for increasing g, by bisection to full precision.
template <class G>
double bisect(G g, double target)
{
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 2000; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (g(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double incomplete_beta(double a, double b, double x)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw std::domain_error("incomplete_beta: shape parameters must be positive");
    if (std::isnan(x))
        throw std::domain_error("incomplete_beta: x is NaN");
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x)
                             - (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double df1, double df2)
{
    check_df(df1, df2);
    if (std::isnan(x))
        throw std::domain_error("f_cdf: x is NaN");
    if (x <= 0.0)
        return 0.0;
    if (std::isinf(x))
        return 1.0;
    const double a = df1 / 2.0, b = df2 / 2.0;
    const double s = df1 * x;
    if (s <= df2)
        return incomplete_beta(a, b, s / (s + df2));
    return 1.0 - incomplete_beta(b, a, df2 / (s + df2));
}

double f_quantile(double p, double df1, double df2)
{
    check_df(df1, df2);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("f_quantile: p = " + std::to_string(p) + " outside (0,1)");
    const double a = df1 / 2.0, b = df2 / 2.0;
    if (p <= 0.5) {
        const double y = bisect([&](double t) { return incomplete_beta(a, b, t); }, p);
        return df2 * y / (df1 * (1.0 - y));
    }
    // Upper half: solve on the complementary variable z = df2 / (df1 x + df2) to keep precision.
    const double z = bisect([&](double t) { return incomplete_beta(b, a, t); }, 1.0 - p);
    return df2 * (1.0 - z) / (df1 * z);
}

} // namespace mam
