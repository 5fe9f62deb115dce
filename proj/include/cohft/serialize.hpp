#pragma once

#include <string>

#include "json.hpp"

#include "cohft/chern.hpp"
#include "cohft/lattice.hpp"

namespace cohft {

// Structured-text formats: rationals are exact strings "p/q" (or "p"),
// fusion tensors list nonzero entries only, unlisted triples are zero.

nlohmann::json fusion_data_to_json(const FusionData& data);
nlohmann::json fusion_datum_to_json(const FusionDatum& datum);
FusionData fusion_data_from_json(const nlohmann::json& doc);

nlohmann::json gram_to_json(const GramLattice& lattice);
GramLattice gram_from_json(const nlohmann::json& doc);

nlohmann::json graph_to_json(const StableGraph& graph);
StableGraph graph_from_json(const nlohmann::json& doc);

// Array of term records sorted by canonical generator encoding.
nlohmann::json class_to_json(const TautClass& cls);
TautClass class_from_json(const nlohmann::json& terms, int g, int n, int max_degree);

// Wrapped form carrying the ambient data, used by machine output.
nlohmann::json class_document(const TautClass& cls);
TautClass class_from_document(const nlohmann::json& doc);

nlohmann::json rank_table_to_json(const RankTable& table, const FusionDatum& datum);
void rank_table_from_json(const nlohmann::json& doc, const FusionDatum& datum, RankTable& table);

nlohmann::json parse_json_text(const std::string& text);  // throws ParseError
std::string load_file(const std::string& path);           // throws ParseError

// FNV-1a 64-bit hex digest; keys cache entries by datum content.
std::string content_hash(const std::string& text);

}  // namespace cohft
