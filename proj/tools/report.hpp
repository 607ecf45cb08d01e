#pragma once

#include <string>

#include "json.hpp"

namespace qgeom::cli {

// Deterministic JSON writer: object key order is preserved, floating-point
// values are rendered with 17 significant digits so that reloading a report
// reproduces every double bit-for-bit.
std::string render_json(const nlohmann::ordered_json& doc);

// Convenience: render + trailing newline to stdout.
void emit_report(const nlohmann::ordered_json& doc);

}  // namespace qgeom::cli
