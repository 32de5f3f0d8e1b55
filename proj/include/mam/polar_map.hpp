#pragma once

#include "mam/feature_vector.hpp"
#include "mam/scales.hpp"

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mam {

/// Position on the expression map. Angles are degrees, counter-clockwise
/// from the positive x axis.
struct Cursor {
    double r = 0.0;
    double phi = 0.0;

    /// Clamps r into [0,1] and wraps phi into [0,360). Throws
    /// std::domain_error on non-finite input.
    static Cursor make(double r, double phi_deg);

    bool operator==(const Cursor&) const = default;
};

/// Maps a point on the controller/pointer plane (map centered at the origin,
/// unit outer radius) to a cursor. Points beyond the rim clamp to r = 1.
Cursor clamp_cursor(double x, double y);

enum class Ring { center, inner, outer };

std::string_view to_string(Ring ring);
Ring ring_from_string(std::string_view s);

/// The nine key expression names, in canonical order.
const std::array<std::string_view, 9>& key_expression_names();

struct KeyExpression {
    std::string name;
    Ring ring = Ring::center;
    double angle_deg = 0.0;
    FeatureVector fv;
    VAScore va;
};

enum class FieldKind { triangle, quad };

/// One cell of the map. Indices refer to PolarMap::expressions().
/// inner edge (a, b) is blended with weight (1 - R), outer edge (d, c) with R.
/// For triangles a == b == center.
struct Field {
    FieldKind kind = FieldKind::triangle;
    std::size_t sector = 0;
    std::size_t e_a = 0, e_b = 0, e_d = 0, e_c = 0;
    double phi_start = 0.0;
    double width = 90.0;
    double r_lo = 0.0, r_hi = 0.5;
};

enum class MapErrorKind {
    malformed,
    schema,
    unknown_name,
    duplicate_name,
    missing_expression,
    wrong_ring,
    out_of_range,
    non_equidistant_angles,
    misaligned_rings,
};

std::string_view to_string(MapErrorKind kind);

class MapError : public std::runtime_error {
public:
    MapError(MapErrorKind kind, std::string entry, const std::string& detail);

    MapErrorKind kind() const { return kind_; }
    const std::string& entry() const { return entry_; }

private:
    MapErrorKind kind_;
    std::string entry_;
};

/// Immutable, validated arrangement of the nine key expressions: one center
/// vertex and two aligned rings of four (radius 0.5 and 1.0), plus the eight
/// derived fields. Safe to share across threads.
class PolarMap {
public:
    /// Validates the expressions and derives the fields. Throws MapError.
    static PolarMap build(SchemaPtr schema, std::vector<KeyExpression> expressions);

    const SchemaPtr& schema() const { return schema_; }
    const std::vector<KeyExpression>& expressions() const { return expressions_; }
    const KeyExpression& expression(std::string_view name) const;

    const KeyExpression& center() const { return expressions_[center_]; }
    /// Ring vertices sorted by angle; inner[i] and outer[i] share an angle.
    const std::array<std::size_t, 4>& inner() const { return inner_; }
    const std::array<std::size_t, 4>& outer() const { return outer_; }

    /// Triangles 0..3 (sector order), then quads 4..7.
    const std::array<Field, 8>& fields() const { return fields_; }

    /// Cartesian position of a vertex (center at the origin).
    Cursor vertex_position(const KeyExpression& e) const;

private:
    PolarMap() = default;

    SchemaPtr schema_;
    std::vector<KeyExpression> expressions_;
    std::size_t center_ = 0;
    std::array<std::size_t, 4> inner_{};
    std::array<std::size_t, 4> outer_{};
    std::array<Field, 8> fields_{};
};

/// Parses a JSON map configuration (top-level `schema` and `expressions`).
PolarMap load_map(std::string_view json_text);
PolarMap load_map_file(const std::string& path);

/// JSON text that load_map reads back to an identical map.
std::string serialize_map(const PolarMap& map);

/// Shipped configuration. Feature values and VA anchors are placeholders
/// placed quadrant-consistently; substitute measured PAM means via a config file.
const PolarMap& default_map();

} // namespace mam
