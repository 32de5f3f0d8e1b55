#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mam {

struct ParameterSpec {
    std::string name;
    double min = 0.0;
    double max = 1.0;

    bool contains(double v) const { return v >= min && v <= max; }
    bool operator==(const ParameterSpec&) const = default;
};

/// Ordered set of facial parameters. Feature vectors built against different
/// schema instances are not comparable, even if the parameter lists match.
class Schema {
public:
    explicit Schema(std::vector<ParameterSpec> params);

    std::size_t size() const { return params_.size(); }
    const ParameterSpec& operator[](std::size_t i) const { return params_[i]; }
    const std::vector<ParameterSpec>& parameters() const { return params_; }

    /// Index of a parameter by name, or size() if absent.
    std::size_t index_of(const std::string& name) const;

    bool same_layout(const Schema& other) const { return params_ == other.params_; }

    /// The six-parameter face schema shipped with the default map.
    static std::shared_ptr<const Schema> face_default();

private:
    std::vector<ParameterSpec> params_;
};

using SchemaPtr = std::shared_ptr<const Schema>;

class SchemaMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class FeatureVector {
public:
    FeatureVector() = default;
    FeatureVector(SchemaPtr schema, std::vector<double> values);

    /// All components zero.
    static FeatureVector zeros(SchemaPtr schema);

    const SchemaPtr& schema() const { return schema_; }
    std::span<const double> values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double at(const std::string& name) const;

    /// True if every component lies inside its declared range.
    bool in_range() const;

    /// (1 - t) * a + t * b, component-wise.
    static FeatureVector lerp(const FeatureVector& a, const FeatureVector& b, double t);

    bool comparable(const FeatureVector& other) const { return schema_ == other.schema_; }
    double max_abs_diff(const FeatureVector& other) const;

    bool operator==(const FeatureVector& other) const;

private:
    SchemaPtr schema_;
    std::vector<double> values_;
};

} // namespace mam
