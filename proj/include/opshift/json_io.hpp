#pragma once

#include <json.hpp>

#include "opshift/polynomial.hpp"
#include "opshift/spectral.hpp"

namespace opshift::io {

using nlohmann::json;

/// Matrix wire format: {"dim": d, "entries": [[re, im], ...]} row-major.
json matrix_to_json(const numlin::ComplexMatrix& m);
numlin::ComplexMatrix matrix_from_json(const json& j);

/// Polynomial wire format: coefficient array [[re, im], ...], index = power.
json poly_to_json(const poly::Polynomial& p);
poly::Polynomial poly_from_json(const json& j);

/// Pair wire format: {"u0": <matrix>, "v": <matrix>}.
json pair_to_json(const numlin::ContractionPair& p);
numlin::ContractionPair pair_from_json(const json& j);

} // namespace opshift::io
