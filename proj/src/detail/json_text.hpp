#pragma once

#include "json.hpp"

#include <string>

namespace svmpc::detail {

using OJson = nlohmann::ordered_json;

/// Indented JSON with arrays of scalars kept on one line. With `exact_floats`
/// every double is written with 17 significant digits; otherwise the shortest
/// round-trip form is used. Non-finite doubles become null.
std::string pretty_json(const OJson& j, bool exact_floats);

/// %.17g, or "nan"/"inf"/"-inf".
std::string format_double(double v);

}  // namespace svmpc::detail
