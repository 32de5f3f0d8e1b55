#include "mam/scales.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mam {

namespace {

void require_range(double x, double lo, double hi, const char* what)
{
    if (!std::isfinite(x) || x < lo || x > hi)
        throw std::domain_error(std::string(what) + ": " + std::to_string(x) + " outside ["
                                + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

} // namespace

VAScore make_va(double valence, double arousal)
{
    require_range(valence, 1.0, 5.0, "valence");
    require_range(arousal, 1.0, 5.0, "arousal");
    return {valence, arousal};
}

double sam9_to_5(double x)
{
    require_range(x, 1.0, 9.0, "sam9_to_5");
    return (x - 1.0) / 2.0 + 1.0;
}

double five_to_sam9(double y)
{
    require_range(y, 1.0, 5.0, "five_to_sam9");
    return (y - 1.0) * 2.0 + 1.0;
}

double center_deap(double x)
{
    require_range(x, 1.0, 9.0, "center_deap");
    return x - 5.0;
}

} // namespace mam
