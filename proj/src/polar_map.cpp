#include "mam/polar_map.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mam {

using nlohmann::json;

namespace {

constexpr double angle_tolerance = 1e-9;

double wrap_degrees(double phi)
{
    double w = std::fmod(phi, 360.0);
    if (w < 0.0)
        w += 360.0;
    if (w >= 360.0)
        w = 0.0;
    return w;
}

} // namespace

Cursor Cursor::make(double r, double phi_deg)
{
    if (!std::isfinite(r) || !std::isfinite(phi_deg))
        throw std::domain_error("cursor coordinates must be finite");
    return {std::clamp(r, 0.0, 1.0), wrap_degrees(phi_deg)};
}

Cursor clamp_cursor(double x, double y)
{
    if (!std::isfinite(x) || !std::isfinite(y))
        throw std::domain_error("clamp_cursor: non-finite point");
    if (x == 0.0 && y == 0.0)
        return {0.0, 0.0};
    const double r = std::min(std::hypot(x, y), 1.0);
    const double phi = std::atan2(y, x) * 180.0 / std::numbers::pi;
    return {r, wrap_degrees(phi)};
}

std::string_view to_string(Ring ring)
{
    switch (ring) {
    case Ring::center: return "center";
    case Ring::inner: return "inner";
    case Ring::outer: return "outer";
    }
    return "?";
}

Ring ring_from_string(std::string_view s)
{
    if (s == "center") return Ring::center;
    if (s == "inner") return Ring::inner;
    if (s == "outer") return Ring::outer;
    throw MapError(MapErrorKind::malformed, std::string(s), "unknown ring");
}

const std::array<std::string_view, 9>& key_expression_names()
{
    static const std::array<std::string_view, 9> names{
        "neutral", "calm", "relaxed", "happy", "excited", "irritated", "tense", "sad", "bored"};
    return names;
}

std::string_view to_string(MapErrorKind kind)
{
    switch (kind) {
    case MapErrorKind::malformed: return "malformed";
    case MapErrorKind::schema: return "schema";
    case MapErrorKind::unknown_name: return "unknown-name";
    case MapErrorKind::duplicate_name: return "duplicate-name";
    case MapErrorKind::missing_expression: return "missing-expression";
    case MapErrorKind::wrong_ring: return "wrong-ring";
    case MapErrorKind::out_of_range: return "out-of-range";
    case MapErrorKind::non_equidistant_angles: return "non-equidistant-angles";
    case MapErrorKind::misaligned_rings: return "misaligned-rings";
    }
    return "?";
}

MapError::MapError(MapErrorKind kind, std::string entry, const std::string& detail)
    : std::runtime_error(std::string(to_string(kind)) + " error at '" + entry + "': " + detail),
      kind_(kind), entry_(std::move(entry))
{
}

PolarMap PolarMap::build(SchemaPtr schema, std::vector<KeyExpression> expressions)
{
    if (!schema)
        throw MapError(MapErrorKind::schema, "schema", "missing schema");

    const auto& names = key_expression_names();
    for (std::size_t i = 0; i < expressions.size(); ++i) {
        const auto& e = expressions[i];
        if (std::find(names.begin(), names.end(), e.name) == names.end())
            throw MapError(MapErrorKind::unknown_name, e.name, "not one of the nine key expressions");
        for (std::size_t j = 0; j < i; ++j)
            if (expressions[j].name == e.name)
                throw MapError(MapErrorKind::duplicate_name, e.name, "listed more than once");
        if (e.fv.schema() != schema)
            throw MapError(MapErrorKind::schema, e.name, "feature vector built against another schema");
        if (!e.fv.in_range()) {
            for (std::size_t k = 0; k < schema->size(); ++k)
                if (!std::isfinite(e.fv[k]) || !(*schema)[k].contains(e.fv[k]))
                    throw MapError(MapErrorKind::out_of_range, e.name,
                                   (*schema)[k].name + " = " + std::to_string(e.fv[k]));
        }
        if (!std::isfinite(e.va.valence) || !std::isfinite(e.va.arousal) || !e.va.in_range())
            throw MapError(MapErrorKind::out_of_range, e.name, "VA anchor outside [1,5]");
        if (e.ring != Ring::center && !std::isfinite(e.angle_deg))
            throw MapError(MapErrorKind::malformed, e.name, "non-finite angle");
    }
    for (auto name : names) {
        auto it = std::find_if(expressions.begin(), expressions.end(),
                               [&](const KeyExpression& e) { return e.name == name; });
        if (it == expressions.end())
            throw MapError(MapErrorKind::missing_expression, std::string(name), "not configured");
    }

    PolarMap map;
    std::vector<std::size_t> inner, outer;
    for (std::size_t i = 0; i < expressions.size(); ++i) {
        auto& e = expressions[i];
        if (e.name == "neutral") {
            if (e.ring != Ring::center)
                throw MapError(MapErrorKind::wrong_ring, e.name, "neutral must be the center vertex");
            e.angle_deg = 0.0;
            map.center_ = i;
        } else if (e.ring == Ring::center) {
            throw MapError(MapErrorKind::wrong_ring, e.name, "only neutral may sit at the center");
        } else {
            e.angle_deg = wrap_degrees(e.angle_deg);
            (e.ring == Ring::inner ? inner : outer).push_back(i);
        }
    }
    if (inner.size() != 4)
        throw MapError(MapErrorKind::wrong_ring, "inner", "expected 4 vertices, got " + std::to_string(inner.size()));
    if (outer.size() != 4)
        throw MapError(MapErrorKind::wrong_ring, "outer", "expected 4 vertices, got " + std::to_string(outer.size()));

    auto by_angle = [&](std::size_t a, std::size_t b) { return expressions[a].angle_deg < expressions[b].angle_deg; };
    std::sort(inner.begin(), inner.end(), by_angle);
    std::sort(outer.begin(), outer.end(), by_angle);

    for (std::size_t i = 0; i < 4; ++i) {
        const double a0 = expressions[inner[i]].angle_deg;
        const double a1 = expressions[inner[(i + 1) % 4]].angle_deg + (i == 3 ? 360.0 : 0.0);
        if (std::abs((a1 - a0) - 90.0) > angle_tolerance)
            throw MapError(MapErrorKind::non_equidistant_angles, expressions[inner[(i + 1) % 4]].name,
                           "inner ring angles must be 90 degrees apart");
    }
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& o = expressions[outer[i]];
        const auto& in = expressions[inner[i]];
        double d = std::abs(o.angle_deg - in.angle_deg);
        d = std::min(d, 360.0 - d);
        if (d > angle_tolerance)
            throw MapError(MapErrorKind::misaligned_rings, o.name,
                           "outer vertex does not share its angle with an inner vertex");
    }

    map.schema_ = std::move(schema);
    map.expressions_ = std::move(expressions);
    std::copy(inner.begin(), inner.end(), map.inner_.begin());
    std::copy(outer.begin(), outer.end(), map.outer_.begin());

    for (std::size_t s = 0; s < 4; ++s) {
        const std::size_t next = (s + 1) % 4;
        const double start = map.expressions_[map.inner_[s]].angle_deg;
        const double end = map.expressions_[map.inner_[next]].angle_deg + (s == 3 ? 360.0 : 0.0);

        Field tri;
        tri.kind = FieldKind::triangle;
        tri.sector = s;
        tri.e_a = tri.e_b = map.center_;
        tri.e_d = map.inner_[s];
        tri.e_c = map.inner_[next];
        tri.phi_start = start;
        tri.width = end - start;
        tri.r_lo = 0.0;
        tri.r_hi = 0.5;
        map.fields_[s] = tri;

        Field quad = tri;
        quad.kind = FieldKind::quad;
        quad.e_a = map.inner_[s];
        quad.e_b = map.inner_[next];
        quad.e_d = map.outer_[s];
        quad.e_c = map.outer_[next];
        quad.r_lo = 0.5;
        quad.r_hi = 1.0;
        map.fields_[4 + s] = quad;
    }
    return map;
}

const KeyExpression& PolarMap::expression(std::string_view name) const
{
    for (const auto& e : expressions_)
        if (e.name == name)
            return e;
    throw std::out_of_range("no key expression named '" + std::string(name) + "'");
}

Cursor PolarMap::vertex_position(const KeyExpression& e) const
{
    switch (e.ring) {
    case Ring::center: return {0.0, 0.0};
    case Ring::inner: return {0.5, e.angle_deg};
    case Ring::outer: return {1.0, e.angle_deg};
    }
    return {};
}

// ---- configuration document ----

namespace {

const json& require(const json& obj, const char* key, const std::string& entry)
{
    if (!obj.is_object() || !obj.contains(key))
        throw MapError(MapErrorKind::malformed, entry, std::string("missing key '") + key + "'");
    return obj.at(key);
}

double require_number(const json& obj, const char* key, const std::string& entry)
{
    const auto& v = require(obj, key, entry);
    if (!v.is_number())
        throw MapError(MapErrorKind::malformed, entry, std::string("'") + key + "' is not a number");
    return v.get<double>();
}

std::string require_string(const json& obj, const char* key, const std::string& entry)
{
    const auto& v = require(obj, key, entry);
    if (!v.is_string())
        throw MapError(MapErrorKind::malformed, entry, std::string("'") + key + "' is not a string");
    return v.get<std::string>();
}

} // namespace

PolarMap load_map(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw MapError(MapErrorKind::malformed, "document", e.what());
    }

    const auto& schema_doc = require(doc, "schema", "document");
    if (!schema_doc.is_array())
        throw MapError(MapErrorKind::malformed, "schema", "must be an array");
    std::vector<ParameterSpec> params;
    for (const auto& p : schema_doc) {
        const auto name = require_string(p, "name", "schema");
        params.push_back({name, require_number(p, "min", name), require_number(p, "max", name)});
    }
    SchemaPtr schema;
    try {
        schema = std::make_shared<const Schema>(std::move(params));
    } catch (const std::invalid_argument& e) {
        throw MapError(MapErrorKind::schema, "schema", e.what());
    }

    const auto& exprs = require(doc, "expressions", "document");
    if (!exprs.is_array())
        throw MapError(MapErrorKind::malformed, "expressions", "must be an array");
    std::vector<KeyExpression> out;
    for (const auto& e : exprs) {
        KeyExpression k;
        k.name = require_string(e, "name", "expressions");
        k.ring = ring_from_string(require_string(e, "ring", k.name));
        k.angle_deg = e.contains("angle_deg") ? require_number(e, "angle_deg", k.name) : 0.0;
        if (k.ring != Ring::center && !e.contains("angle_deg"))
            throw MapError(MapErrorKind::malformed, k.name, "ring vertex without angle_deg");

        const auto& fv = require(e, "fv", k.name);
        if (!fv.is_object())
            throw MapError(MapErrorKind::malformed, k.name, "fv must be an object");
        std::vector<double> values(schema->size());
        for (std::size_t i = 0; i < schema->size(); ++i)
            values[i] = require_number(fv, (*schema)[i].name.c_str(), k.name);
        for (const auto& [key, _] : fv.items())
            if (schema->index_of(key) == schema->size())
                throw MapError(MapErrorKind::schema, k.name, "fv component '" + key + "' not in schema");
        k.fv = FeatureVector(schema, std::move(values));
        k.va = {require_number(e, "valence", k.name), require_number(e, "arousal", k.name)};
        out.push_back(std::move(k));
    }
    return PolarMap::build(std::move(schema), std::move(out));
}

PolarMap load_map_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open map configuration '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_map(ss.str());
}

std::string serialize_map(const PolarMap& map)
{
    json doc;
    doc["schema"] = json::array();
    for (const auto& p : map.schema()->parameters())
        doc["schema"].push_back({{"name", p.name}, {"min", p.min}, {"max", p.max}});

    // Canonical name order keeps the output independent of input ordering.
    doc["expressions"] = json::array();
    for (auto name : key_expression_names()) {
        const auto& e = map.expression(name);
        json entry;
        entry["name"] = e.name;
        entry["ring"] = std::string(to_string(e.ring));
        if (e.ring != Ring::center)
            entry["angle_deg"] = e.angle_deg;
        json fv = json::object();
        for (std::size_t i = 0; i < map.schema()->size(); ++i)
            fv[(*map.schema())[i].name] = e.fv[i];
        entry["fv"] = std::move(fv);
        entry["valence"] = e.va.valence;
        entry["arousal"] = e.va.arousal;
        doc["expressions"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

const PolarMap& default_map()
{
    static const PolarMap map = [] {
        const auto schema = Schema::face_default();
        struct Row {
            const char* name;
            Ring ring;
            double angle;
            std::vector<double> fv; // curvature, opening, brow L, brow R, eye closure, nostril
            double valence, arousal;
        };
        const Row rows[] = {
            {"neutral", Ring::center, 0.0, {0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 3.0, 3.0},
            {"happy", Ring::inner, 45.0, {0.6, 0.2, -0.1, -0.1, 0.1, 0.0}, 3.8, 3.6},
            {"excited", Ring::outer, 45.0, {1.0, 0.8, -0.3, -0.3, 0.0, 0.2}, 4.5, 4.4},
            {"tense", Ring::inner, 135.0, {-0.3, 0.1, 0.5, 0.5, 0.1, 0.3}, 2.3, 3.7},
            {"irritated", Ring::outer, 135.0, {-0.6, 0.2, 0.9, 0.9, 0.3, 1.0}, 1.6, 4.3},
            {"bored", Ring::inner, 225.0, {-0.2, 0.0, -0.2, -0.2, 0.6, 0.0}, 2.4, 2.2},
            {"sad", Ring::outer, 225.0, {-0.9, 0.1, -0.7, -0.7, 0.4, 0.0}, 1.6, 1.8},
            {"calm", Ring::inner, 315.0, {0.3, 0.0, -0.1, -0.1, 0.4, 0.0}, 3.7, 2.3},
            {"relaxed", Ring::outer, 315.0, {0.5, 0.05, -0.2, -0.2, 0.7, 0.0}, 4.4, 1.7},
        };
        std::vector<KeyExpression> exprs;
        for (const auto& row : rows)
            exprs.push_back({row.name, row.ring, row.angle, FeatureVector(schema, row.fv), {row.valence, row.arousal}});
        return PolarMap::build(schema, std::move(exprs));
    }();
    return map;
}

} // namespace mam
