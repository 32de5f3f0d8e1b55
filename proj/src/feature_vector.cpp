#include "mam/feature_vector.hpp"

#include <algorithm>
#include <cmath>

namespace mam {

Schema::Schema(std::vector<ParameterSpec> params) : params_(std::move(params))
{
    if (params_.empty())
        throw std::invalid_argument("schema has no parameters");
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const auto& p = params_[i];
        if (p.name.empty())
            throw std::invalid_argument("schema parameter with empty name");
        if (!(p.min < p.max))
            throw std::invalid_argument("schema parameter '" + p.name + "' has an empty range");
        for (std::size_t j = 0; j < i; ++j)
            if (params_[j].name == p.name)
                throw std::invalid_argument("schema parameter '" + p.name + "' declared twice");
    }
}

std::size_t Schema::index_of(const std::string& name) const
{
    for (std::size_t i = 0; i < params_.size(); ++i)
        if (params_[i].name == name)
            return i;
    return params_.size();
}

std::shared_ptr<const Schema> Schema::face_default()
{
    static const auto schema = std::make_shared<const Schema>(std::vector<ParameterSpec>{
        {"mouth_curvature", -1.0, 1.0},
        {"mouth_opening", 0.0, 1.0},
        {"brow_bend_left", -1.0, 1.0},
        {"brow_bend_right", -1.0, 1.0},
        {"eye_closure", 0.0, 1.0},
        {"nostril_flare", 0.0, 1.0},
    });
    return schema;
}

FeatureVector::FeatureVector(SchemaPtr schema, std::vector<double> values)
    : schema_(std::move(schema)), values_(std::move(values))
{
    if (!schema_)
        throw std::invalid_argument("feature vector without schema");
    if (values_.size() != schema_->size())
        throw SchemaMismatch("feature vector has " + std::to_string(values_.size())
                             + " components, schema declares " + std::to_string(schema_->size()));
}

FeatureVector FeatureVector::zeros(SchemaPtr schema)
{
    const auto n = schema->size();
    return FeatureVector(std::move(schema), std::vector<double>(n, 0.0));
}

double FeatureVector::at(const std::string& name) const
{
    const auto i = schema_->index_of(name);
    if (i == schema_->size())
        throw std::out_of_range("no parameter named '" + name + "'");
    return values_[i];
}

bool FeatureVector::in_range() const
{
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]) || !(*schema_)[i].contains(values_[i]))
            return false;
    return true;
}

FeatureVector FeatureVector::lerp(const FeatureVector& a, const FeatureVector& b, double t)
{
    if (!a.comparable(b))
        throw SchemaMismatch("cannot blend feature vectors of different schemas");
    std::vector<double> out(a.values_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = (1.0 - t) * a.values_[i] + t * b.values_[i];
    return FeatureVector(a.schema_, std::move(out));
}

double FeatureVector::max_abs_diff(const FeatureVector& other) const
{
    if (!comparable(other))
        throw SchemaMismatch("cannot compare feature vectors of different schemas");
    double d = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        d = std::max(d, std::abs(values_[i] - other.values_[i]));
    return d;
}

bool FeatureVector::operator==(const FeatureVector& other) const
{
    return comparable(other) && values_ == other.values_;
}

} // namespace mam
