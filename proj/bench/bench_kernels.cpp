// Serial reference vs OpenMP kernels: batch interpolation and batch ICC.
#include "mam/analysis.hpp"
#include "mam/interpolation.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

namespace {

template <class F>
double best_ms(int reps, F&& f)
{
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv)
{
    const std::size_t n_cursors = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 1'000'000;
    const std::size_t n_matrices = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20'000;

    const auto& map = mam::default_map();
    const auto dim = map.schema()->size();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0), deg(0.0, 360.0);

    std::vector<mam::Cursor> cursors;
    cursors.reserve(n_cursors);
    for (std::size_t i = 0; i < n_cursors; ++i)
        cursors.push_back(mam::Cursor::make(std::sqrt(u01(rng)), deg(rng)));
    std::vector<double> fv_a(n_cursors * dim), fv_b(n_cursors * dim);
    std::vector<mam::VAScore> va_a(n_cursors), va_b(n_cursors);

    const double t_serial = best_ms(3, [&] { mam::interpolate_batch_serial(map, cursors, fv_a, va_a); });
    const double t_omp = best_ms(3, [&] { mam::interpolate_batch(map, cursors, fv_b, va_b); });
    std::printf("interpolate  n=%zu threads=%d serial=%.2f ms omp=%.2f ms speedup=%.2fx identical=%s\n", n_cursors,
                omp_get_max_threads(), t_serial, t_omp, t_serial / t_omp, fv_a == fv_b ? "yes" : "no");

    std::uniform_int_distribution<int> score(1, 9);
    std::vector<mam::RatingsMatrix> matrices;
    matrices.reserve(n_matrices);
    for (std::size_t i = 0; i < n_matrices; ++i) {
        std::vector<double> cells(32 * 4);
        for (auto& c : cells)
            c = score(rng);
        matrices.emplace_back(32, 4, std::move(cells));
    }
    std::vector<mam::ICCOutcome> s, p;
    const double i_serial = best_ms(3, [&] { s = mam::icc_batch_serial(matrices); });
    const double i_omp = best_ms(3, [&] { p = mam::icc_batch(matrices); });
    bool same = s.size() == p.size();
    for (std::size_t i = 0; same && i < s.size(); ++i)
        same = s[i].result.has_value() == p[i].result.has_value()
               && (!s[i].result || (s[i].result->icc == p[i].result->icc && s[i].result->ci_low == p[i].result->ci_low));
    std::printf("icc_a_k      n=%zu (32x4) serial=%.2f ms omp=%.2f ms speedup=%.2fx identical=%s\n", n_matrices,
                i_serial, i_omp, i_serial / i_omp, same ? "yes" : "no");
    return 0;
}
