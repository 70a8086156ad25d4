#pragma once

#include <string>

#include <json.hpp>

#include "lot/bounds.hpp"
#include "lot/classify.hpp"
#include "lot/embed.hpp"

namespace lot {

using Json = nlohmann::json;

// {"dim": d, "points": [[...], ...], "weights": [...]}; all three fields are
// required. Throws InvalidArgument on malformed documents.
Json measure_to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const Json& j);
DiscreteMeasure read_measure(const std::string& path);
void write_measure(const std::string& path, const DiscreteMeasure& mu);

// Stable hex digest of a measure's atoms and weights.
std::string measure_fingerprint(const DiscreteMeasure& mu);

// {"reference_id", "source_id", "values"}
Json embedding_to_json(const Embedding& e, const std::string& reference_id);

// First line: empty cell then the labels; one row per label after that.
std::string distance_matrix_to_csv(const DistanceMatrix& m);

Json gap_curve_to_json(const GapCurve& curve);
// eps,gap_mean,gap_max,bound
std::string gap_curve_to_csv(const GapCurve& curve);
Json bounds_report_to_json(const BoundsReport& report);
Json eval_report_to_json(const EvalReport& report);

void write_text(const std::string& path, const std::string& contents);
std::string read_text(const std::string& path);

}  // namespace lot
