#pragma once

#include <string>

#include "json.hpp"
#include "tomoscope/bodies.hpp"

namespace tomoscope::cli {

/// Builds a body from a JSON document {kind, params, center?, orientation?}.
/// Field reference: docs/body-spec.md. Throws Error(InvalidSpec) on any
/// schema violation, including unknown fields.
ConvexBody parse_body_spec(const nlohmann::json& doc);

/// Reads and parses a body spec file.
ConvexBody load_body_spec(const std::string& path, nlohmann::json* doc_out = nullptr);

}  // namespace tomoscope::cli
