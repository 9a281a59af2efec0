#pragma once

#include "quiverforge/charvar.hpp"
#include "quiverforge/path_algebra.hpp"
#include "quiverforge/quiver.hpp"
#include "quiverforge/representation.hpp"

#include <json.hpp>

#include <string>

namespace quiverforge {

using Json = nlohmann::ordered_json;

/// Serializes with every float printed at 17 significant digits, so doubles
/// round-trip losslessly and identical values give byte-identical output.
std::string dump_json17(const Json& j, int indent = -1);

Json quiver_to_json(const Quiver& q);
/// {"vertices": [...], "edges": [{"id":k,"tail":t,"head":h},...]};
/// edge ids must equal array positions.
Quiver quiver_from_json(const Json& j);

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json representation_to_json(const Representation& rep, bool inline_quiver = true);
/// "quiver" may be an inline object or a path string to a quiver JSON file.
Representation representation_from_json(const Json& j);

Json relation_to_json(const Relation& r);
/// Paths are edge-id lists head-to-tail (rightmost edge acts first).
Relation relation_from_json(const Json& j, const QuiverPtr& q);

Json sympoly_to_json(const SymPoly& p);
SymPoly sympoly_from_json(const Json& j);

Json complex_to_json(const std::complex<double>& c);
std::complex<double> complex_from_json(const Json& j);

}  // namespace quiverforge
