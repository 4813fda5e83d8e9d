#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "simplexia/asym_approx.hpp"
#include "simplexia/simplex.hpp"
#include "simplexia/symmetrization.hpp"

namespace simplexia {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Matrices are nested row-major arrays.
[[nodiscard]] Json matrix_to_json(const Matrix& m);
[[nodiscard]] Json vector_to_json(const Vector& v);
[[nodiscard]] Matrix matrix_from_json(const Json& j);
[[nodiscard]] Vector vector_from_json(const Json& j);

/// Infinite values are written as the string "inf".
[[nodiscard]] Json number_to_json(double x);
/// Accepts numbers and the strings "inf", "infinity", "∞".
[[nodiscard]] double number_from_json(const Json& j);

/// {"dim": d, "vertices": [[...], ...]}
[[nodiscard]] Json to_json(const Simplex& s);
/// Throws ParseError on malformed input and DegenerateSimplexError on flat simplices.
[[nodiscard]] Simplex simplex_from_json(const Json& j);
[[nodiscard]] Simplex read_simplex_file(const std::string& path);

/// {"error", "a", "c", "evaluator", "flags"}
[[nodiscard]] Json to_json(const ApproxResult& r);
[[nodiscard]] Json to_json(const AsymParams& params);
[[nodiscard]] Json to_json(const CanonicalFrame& frame);
[[nodiscard]] Json to_json(const SymmetrizationReport& r);

}  // namespace simplexia
