#include "mam/interpolation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mam {

double radius_rescale(double r)
{
    if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("radius_rescale: r = " + std::to_string(r) + " outside [0,1]");
    return r <= 0.5 ? 2.0 * r : 2.0 * (r - 0.5);
}

namespace {

std::size_t sector_of(const PolarMap& map, double phi)
{
    // Sector i spans [start_i, start_{i+1}); angles below the first start wrap to the last sector.
    const auto& fields = map.fields();
    std::size_t sector = 3;
    for (std::size_t s = 0; s < 4; ++s)
        if (phi >= fields[s].phi_start)
            sector = s;
    return sector;
}

double angular_ratio(const Field& field, double phi)
{
    double delta = phi - field.phi_start;
    if (delta < 0.0)
        delta += 360.0;
    return delta / field.width;
}

double field_radial(const Field& field, double r)
{
    return field.kind == FieldKind::triangle ? 2.0 * r : 2.0 * (r - 0.5);
}

// out[i] = (1-R)[(1-T) a[i] + T b[i]] + R[(1-T) d[i] + T c[i]]
void blend(const double* a, const double* b, const double* d, const double* c, std::size_t n,
           double theta, double radial, double* out)
{
    for (std::size_t i = 0; i < n; ++i) {
        const double inner = (1.0 - theta) * a[i] + theta * b[i];
        const double outer = (1.0 - theta) * d[i] + theta * c[i];
        out[i] = (1.0 - radial) * inner + radial * outer;
    }
}

struct Weights {
    const Field* field;
    double theta;
    double radial;
};

Weights weights_for(const PolarMap& map, const Cursor& cursor)
{
    const auto& field = locate_field(map, cursor);
    return {&field, angular_ratio(field, cursor.phi), field_radial(field, cursor.r)};
}

void eval_into(const PolarMap& map, const Weights& w, double* fv_out, VAScore& va_out)
{
    const auto& ex = map.expressions();
    const auto& f = *w.field;
    const auto& ea = ex[f.e_a];
    const auto& eb = ex[f.e_b];
    const auto& ed = ex[f.e_d];
    const auto& ec = ex[f.e_c];
    blend(ea.fv.values().data(), eb.fv.values().data(), ed.fv.values().data(), ec.fv.values().data(),
          map.schema()->size(), w.theta, w.radial, fv_out);

    const double va_a[2] = {ea.va.valence, ea.va.arousal};
    const double va_b[2] = {eb.va.valence, eb.va.arousal};
    const double va_d[2] = {ed.va.valence, ed.va.arousal};
    const double va_c[2] = {ec.va.valence, ec.va.arousal};
    double va[2];
    blend(va_a, va_b, va_d, va_c, 2, w.theta, w.radial, va);
    va_out = {va[0], va[1]};
}

Interpolation eval(const PolarMap& map, const Weights& w)
{
    std::vector<double> values(map.schema()->size());
    Interpolation out;
    eval_into(map, w, values.data(), out.va);
    out.fv = FeatureVector(map.schema(), std::move(values));
    out.field = w.field;
    out.theta = w.theta;
    out.radial = w.radial;
    return out;
}

void check_batch_shapes(const PolarMap& map, std::span<const Cursor> cursors, std::span<double> fv_out,
                        std::span<VAScore> va_out)
{
    if (fv_out.size() != cursors.size() * map.schema()->size() || va_out.size() != cursors.size())
        throw std::invalid_argument("interpolate_batch: output spans do not match cursor count");
}

} // namespace

const Field& locate_field(const PolarMap& map, const Cursor& cursor)
{
    const std::size_t sector = sector_of(map, cursor.phi);
    return map.fields()[cursor.r <= 0.5 ? sector : 4 + sector];
}

Interpolation interpolate(const PolarMap& map, const Cursor& cursor)
{
    return eval(map, weights_for(map, cursor));
}

Interpolation evaluate_field(const PolarMap& map, const Field& field, const Cursor& cursor)
{
    double theta = angular_ratio(field, cursor.phi);
    // closing spoke: exact, since the seam field's width and delta round differently
    if (cursor.phi == std::fmod(field.phi_start + field.width, 360.0))
        theta = 1.0;
    return eval(map, {&field, theta, field_radial(field, cursor.r)});
}

FeatureVector interpolate_expression(const PolarMap& map, const Cursor& cursor)
{
    return interpolate(map, cursor).fv;
}

VAScore interpolate_va(const PolarMap& map, const Cursor& cursor)
{
    return interpolate(map, cursor).va;
}

void interpolate_batch(const PolarMap& map, std::span<const Cursor> cursors, std::span<double> fv_out,
                       std::span<VAScore> va_out)
{
    check_batch_shapes(map, cursors, fv_out, va_out);
    const std::size_t dim = map.schema()->size();
    const auto n = static_cast<std::ptrdiff_t>(cursors.size());

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto w = weights_for(map, cursors[i]);
        eval_into(map, w, fv_out.data() + i * dim, va_out[i]);
    }
}

void interpolate_batch_serial(const PolarMap& map, std::span<const Cursor> cursors, std::span<double> fv_out,
                              std::span<VAScore> va_out)
{
    check_batch_shapes(map, cursors, fv_out, va_out);
    const std::size_t dim = map.schema()->size();
    for (std::size_t i = 0; i < cursors.size(); ++i) {
        const auto w = weights_for(map, cursors[i]);
        eval_into(map, w, fv_out.data() + i * dim, va_out[i]);
    }
}

} // namespace mam
