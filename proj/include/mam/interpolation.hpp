#pragma once

#include "mam/feature_vector.hpp"
#include "mam/polar_map.hpp"
#include "mam/scales.hpp"

#include <span>

namespace mam {

/// Maps a radius in [0,1] onto the [0,1] weight of its ring band:
/// 2r on the inner band, 2(r - 0.5) on the outer one.
double radius_rescale(double r);

/// Field containing the cursor. Angular spans are half-open [start, end) and
/// the inner band owns r = 0.5, so each cursor maps to exactly one field.
const Field& locate_field(const PolarMap& map, const Cursor& cursor);

struct Interpolation {
    FeatureVector fv;
    VAScore va;
    const Field* field = nullptr;
    double theta = 0.0;  // angular ratio within the field
    double radial = 0.0; // rescaled radius
};

/// Blends the field's four vertices: first along each edge by the angular
/// ratio, then between the edges by the rescaled radius. Triangles use the
/// center for the whole inner edge.
Interpolation interpolate(const PolarMap& map, const Cursor& cursor);

/// Evaluates a specific field's blend at the cursor, whether or not the cursor
/// lies inside it. Used to compare adjacent fields on shared boundaries.
Interpolation evaluate_field(const PolarMap& map, const Field& field, const Cursor& cursor);

FeatureVector interpolate_expression(const PolarMap& map, const Cursor& cursor);
VAScore interpolate_va(const PolarMap& map, const Cursor& cursor);

/// Batch evaluation. fv_out is row-major, cursors.size() x schema size.
/// The OpenMP kernel and the serial reference must produce identical output.
void interpolate_batch(const PolarMap& map, std::span<const Cursor> cursors,
                       std::span<double> fv_out, std::span<VAScore> va_out);
void interpolate_batch_serial(const PolarMap& map, std::span<const Cursor> cursors,
                              std::span<double> fv_out, std::span<VAScore> va_out);

} // namespace mam
