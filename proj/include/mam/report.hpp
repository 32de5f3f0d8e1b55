#pragma once

#include "mam/analysis.hpp"
#include "mam/durations.hpp"
#include "mam/interpolation.hpp"
#include "mam/session.hpp"
#include "mam/stimulus_selection.hpp"
#include "mam/tables.hpp"

#include <json.hpp>

namespace mam::report {

using nlohmann::ordered_json;

/// exact: shortest round-trip doubles (service responses).
/// fixed6: rounded to 6 decimals (CLI reports, reproducible goldens).
enum class Precision { exact, fixed6 };

ordered_json number(double x, Precision p);

ordered_json to_json(const FeatureVector& fv, Precision p);
ordered_json to_json(const VAScore& va, Precision p);
ordered_json to_json(const Cursor& c, Precision p);
ordered_json to_json(const SessionState& s, Precision p);

ordered_json interpolation(const Cursor& cursor, const Interpolation& result, Precision p);

ordered_json selection(const SelectionResult& result, const SelectionConfig& config);

ordered_json durations(const DurationReport& report, Precision p);

ordered_json replay(const ReplayResult& result, const DurationReport& durations, Precision p);

/// ICC per (dimension, stimulus) group, their average, per-method means and
/// mean-difference matrices per dimension.
ordered_json analysis(const std::vector<RatingRow>& rows, const std::vector<RatingGroup>& groups,
                      const std::vector<ICCOutcome>& iccs, double alpha);

} // namespace mam::report
