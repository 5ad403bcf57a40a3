#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "qlego/enumerator.hpp"
#include "qlego/schedule.hpp"

namespace qlego {

using Json = nlohmann::ordered_json;

/// {"nodes": [{"id", "kind", "params"}], "edges": [[{"node", "leg"}, {...}]]}.
/// params holds "arity" for repetition nodes, "legs"/"pcm"/"label" for
/// custom nodes and "roles" whenever they differ from the kind's defaults.
Json network_to_json(const TensorNetwork& net);
TensorNetwork network_from_json(const Json& j);

/// Nested arrays of node ids: [[0,1],2].
Json tree_to_json(const ContractionTree& tree);
ContractionTree tree_from_json(const Json& j);

/// {"coeffs": {"0": 1, "4": 3}, "n": n, "k": k, "poly": "1 + 3z^4"}.
Json wep_to_json(const WeightPolynomial& p, std::size_t n, std::size_t k);
WeightPolynomial wep_from_json(const Json& j);

Json cost_report_to_json(const CostReport& r);

/// Reads a JSON file; ParseError on syntax errors, InvalidInputError when
/// the file cannot be opened.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qlego
