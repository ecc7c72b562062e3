#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "framekit/constructions.hpp"
#include "framekit/frame.hpp"
#include "framekit/projection.hpp"
#include "framekit/subframe.hpp"

namespace framekit::io {

using Json = nlohmann::ordered_json;

/// Parses a JSON file; unreadable or malformed files raise invalid_input naming the path.
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Two-space indented JSON followed by a newline.
std::string dump(const Json& j);

/// {"dim": d, "vectors": [[...], ...], "labels": [...]} with labels optional.
/// Extra top-level fields are ignored so constructed-frame files load as families.
FrameFamily family_from_json(const Json& j);
Json to_json(const FrameFamily& f);

/// Either a bare array or {"vector": [...]}.
Vector vector_from_json(const Json& j);

/// Either a bare array or {"permutation": [...]}.
projection::Permutation permutation_from_json(const Json& j);

/// Field names mirror ConstructionSpec; unknown fields are rejected.
constructions::ConstructionSpec spec_from_json(const Json& j);
Json to_json(const constructions::ConstructionSpec& spec);

Json to_json(const TolerancePolicy& tol);
Json to_json(const FrameBounds& b);
Json to_json(const IndexSet& s);
Json to_json(const subframe::RieszFrameReport& r);
Json to_json(const subframe::RieszBasis& b);
Json to_json(const subframe::SubframeDecomposition& d);
Json to_json(const constructions::ConstructedFrame& c);
Json to_json(const projection::ProjectionDiagnostics& d);

/// Columns: level,l2_error,max_coord_error,max_dual_norm.
std::string diagnostics_csv(const projection::ProjectionDiagnostics& d);

}  // namespace framekit::io
