#include "cohft/serialize.hpp"

#include <fstream>
#include <sstream>

namespace cohft {

using nlohmann::json;

namespace {

Rational rational_field(const json& value, const std::string& context) {
  try {
    if (value.is_string()) return rational_from_string(value.get<std::string>());
    if (value.is_number_integer()) return Rational(static_cast<long>(value.get<long long>()));
  } catch (const std::invalid_argument& e) {
    throw ParseError(context + ": " + e.what());
  }
  throw ParseError(context + ": expected an exact rational string");
}

Integer integer_field(const json& value, const std::string& context) {
  if (value.is_number_unsigned() || value.is_number_integer())
    return Integer(static_cast<long>(value.get<long long>()));
  if (value.is_string()) {
    try {
      return Integer(value.get<std::string>());
    } catch (const std::invalid_argument&) {
    }
  }
  throw ParseError(context + ": expected an integer");
}

json integer_to_json(const Integer& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

}  // namespace

nlohmann::json fusion_data_to_json(const FusionData& data) {
  json doc;
  doc["modules"] = data.labels;
  doc["unit"] = data.labels[data.unit];
  json dual = json::object();
  for (std::size_t i = 0; i < data.labels.size(); ++i)
    dual[data.labels[i]] = data.labels[data.dual[i]];
  doc["dual"] = dual;
  doc["central_charge"] = rational_to_string(data.central_charge);
  json dims = json::object();
  for (std::size_t i = 0; i < data.labels.size(); ++i)
    dims[data.labels[i]] = rational_to_string(data.conf_dim[i]);
  doc["conformal_dimensions"] = dims;
  json fusion = json::array();
  for (const auto& [key, value] : data.fusion) {
    fusion.push_back(
        json::array({data.labels[key[0]], data.labels[key[1]], data.labels[key[2]], integer_to_json(value)}));
  }
  doc["fusion"] = fusion;
  return doc;
}

nlohmann::json fusion_datum_to_json(const FusionDatum& datum) { return fusion_data_to_json(datum.raw()); }

FusionData fusion_data_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("fusion datum: expected an object");
  for (const char* field : {"modules", "unit", "dual", "central_charge", "conformal_dimensions", "fusion"})
    if (!doc.contains(field)) throw ParseError(std::string("fusion datum: missing field '") + field + "'");

  FusionData data;
  if (!doc["modules"].is_array() || doc["modules"].empty())
    throw ParseError("fusion datum: 'modules' must be a nonempty array of labels");
  for (const auto& label : doc["modules"]) {
    if (!label.is_string()) throw ParseError("fusion datum: module labels must be strings");
    data.labels.push_back(label.get<std::string>());
  }
  auto index_of = [&](const std::string& label, const std::string& context) {
    for (std::size_t i = 0; i < data.labels.size(); ++i)
      if (data.labels[i] == label) return static_cast<int>(i);
    throw ParseError(context + ": unknown module label '" + label + "'");
  };

  data.unit = index_of(doc["unit"].get<std::string>(), "fusion datum unit");

  data.dual.assign(data.labels.size(), -1);
  if (!doc["dual"].is_object()) throw ParseError("fusion datum: 'dual' must be a map");
  for (const auto& [from, to] : doc["dual"].items())
    data.dual[index_of(from, "dual map")] = index_of(to.get<std::string>(), "dual map");
  for (std::size_t i = 0; i < data.dual.size(); ++i)
    if (data.dual[i] < 0)
      throw ParseError("dual map: missing entry for module '" + data.labels[i] + "'");

  data.central_charge = rational_field(doc["central_charge"], "central_charge");

  data.conf_dim.assign(data.labels.size(), Rational(0));
  std::vector<char> dim_seen(data.labels.size(), 0);
  for (const auto& [label, value] : doc["conformal_dimensions"].items()) {
    int i = index_of(label, "conformal_dimensions");
    data.conf_dim[i] = rational_field(value, "conformal_dimensions['" + label + "']");
    dim_seen[i] = 1;
  }
  for (std::size_t i = 0; i < dim_seen.size(); ++i)
    if (!dim_seen[i])
      throw ParseError("conformal_dimensions: missing entry for module '" + data.labels[i] + "'");

  if (!doc["fusion"].is_array()) throw ParseError("fusion datum: 'fusion' must be an array");
  for (const auto& entry : doc["fusion"]) {
    if (!entry.is_array() || entry.size() != 4)
      throw ParseError("fusion entry must be [label,label,label,integer]");
    int i = index_of(entry[0].get<std::string>(), "fusion entry");
    int j = index_of(entry[1].get<std::string>(), "fusion entry");
    int k = index_of(entry[2].get<std::string>(), "fusion entry");
    Integer value = integer_field(entry[3], "fusion entry");
    Integer existing = data.fusion_at(i, j, k);
    if (existing != 0 && existing != value)
      throw ParseError("conflicting fusion entries for triple (" + entry[0].get<std::string>() + "," +
                       entry[1].get<std::string>() + "," + entry[2].get<std::string>() + ")");
    if (value != 0) data.set_fusion(i, j, k, value);
  }
  return data;
}

nlohmann::json gram_to_json(const GramLattice& lattice) {
  json rows = json::array();
  for (const auto& row : lattice.gram) {
    json r = json::array();
    for (const auto& v : row) r.push_back(integer_to_json(v));
    rows.push_back(r);
  }
  return json{{"gram", rows}};
}

GramLattice gram_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("gram") || !doc["gram"].is_array() || doc["gram"].empty())
    throw ParseError("lattice document: expected {\"gram\": [[...]]}");
  GramLattice lattice;
  for (const auto& row : doc["gram"]) {
    if (!row.is_array()) throw ParseError("lattice document: gram rows must be arrays");
    std::vector<Integer> r;
    for (const auto& v : row) r.push_back(integer_field(v, "gram entry"));
    lattice.gram.push_back(std::move(r));
  }
  return lattice;
}

nlohmann::json graph_to_json(const StableGraph& graph) {
  json vertices = json::array();
  for (int g : graph.vertex_genus) vertices.push_back(json{{"genus", g}});
  json legs = json::array();
  for (int i = 0; i < graph.num_legs(); ++i)
    legs.push_back(json{{"label", i + 1}, {"vertex", graph.leg_vertex[i]}});
  json edges = json::array();
  for (const auto& e : graph.edges)
    edges.push_back(json::array({json{{"vertex", e[0]}}, json{{"vertex", e[1]}}}));
  return json{{"vertices", vertices}, {"legs", legs}, {"edges", edges}};
}

StableGraph graph_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("vertices"))
    throw ParseError("graph document: expected vertices/legs/edges");
  StableGraph graph;
  for (const auto& v : doc["vertices"]) graph.vertex_genus.push_back(v.at("genus").get<int>());
  if (doc.contains("legs")) {
    std::vector<std::pair<int, int>> labeled;
    for (const auto& l : doc["legs"])
      labeled.emplace_back(l.at("label").get<int>(), l.at("vertex").get<int>());
    graph.leg_vertex.assign(labeled.size(), 0);
    for (const auto& [label, vertex] : labeled) {
      if (label < 1 || label > static_cast<int>(labeled.size()))
        throw ParseError("graph document: leg labels must be 1..n");
      graph.leg_vertex[label - 1] = vertex;
    }
  }
  if (doc.contains("edges")) {
    for (const auto& e : doc["edges"]) {
      if (!e.is_array() || e.size() != 2) throw ParseError("graph document: edges are endpoint pairs");
      graph.edges.push_back({e[0].at("vertex").get<int>(), e[1].at("vertex").get<int>()});
    }
  }
  return graph;
}

nlohmann::json class_to_json(const TautClass& cls) {
  json terms = json::array();
  for (const auto& [key, term] : cls.terms()) {
    json psi_legs = json::object();
    for (int i = 0; i < static_cast<int>(term.gen.psi_leg.size()); ++i)
      if (term.gen.psi_leg[i] != 0) psi_legs[std::to_string(i + 1)] = term.gen.psi_leg[i];
    json psi_halves = json::object();
    for (int h = 0; h < static_cast<int>(term.gen.psi_half.size()); ++h)
      if (term.gen.psi_half[h] != 0)
        psi_halves[std::to_string(h / 2) + ":" + std::to_string(h % 2)] = term.gen.psi_half[h];
    terms.push_back(json{{"coefficient", rational_to_string(term.coeff)},
                         {"lambda", term.gen.lambda_exp},
                         {"graph", graph_to_json(term.gen.graph)},
                         {"psi_legs", psi_legs},
                         {"psi_half_edges", psi_halves}});
  }
  return terms;
}

TautClass class_from_json(const nlohmann::json& terms, int g, int n, int max_degree) {
  TautClass cls(g, n, max_degree);
  if (!terms.is_array()) throw ParseError("class document: expected an array of terms");
  for (const auto& entry : terms) {
    Generator gen;
    gen.graph = graph_from_json(entry.at("graph"));
    gen.lambda_exp = entry.value("lambda", 0);
    gen.psi_leg.assign(n, 0);
    if (entry.contains("psi_legs")) {
      for (const auto& [label, exp] : entry.at("psi_legs").items()) {
        int leg = std::stoi(label);
        if (leg < 1 || leg > n) throw ParseError("class document: psi leg label out of range");
        gen.psi_leg[leg - 1] = exp.get<int>();
      }
    }
    gen.psi_half.assign(gen.graph.num_half_edges(), 0);
    if (entry.contains("psi_half_edges")) {
      for (const auto& [key, exp] : entry.at("psi_half_edges").items()) {
        auto sep = key.find(':');
        if (sep == std::string::npos) throw ParseError("class document: bad half-edge key");
        int e = std::stoi(key.substr(0, sep));
        int side = std::stoi(key.substr(sep + 1));
        if (e < 0 || e >= gen.graph.num_edges() || side < 0 || side > 1)
          throw ParseError("class document: half-edge key out of range");
        gen.psi_half[2 * e + side] = exp.get<int>();
      }
    }
    cls.add_term(std::move(gen), rational_field(entry.at("coefficient"), "class coefficient"));
  }
  return cls;
}

nlohmann::json class_document(const TautClass& cls) {
  return json{{"genus", cls.ambient_genus()},
              {"n", cls.ambient_legs()},
              {"max_degree", cls.max_degree()},
              {"terms", class_to_json(cls)}};
}

TautClass class_from_document(const nlohmann::json& doc) {
  return class_from_json(doc.at("terms"), doc.at("genus").get<int>(), doc.at("n").get<int>(),
                         doc.at("max_degree").get<int>());
}

nlohmann::json rank_table_to_json(const RankTable& table, const FusionDatum& datum) {
  json entries = json::array();
  for (const auto& [key, value] : table.snapshot()) {
    json labels = json::array();
    for (int m : key.second) labels.push_back(datum.label(m));
    entries.push_back(json::array({key.first, labels, value.get_str()}));
  }
  return json{{"ranks", entries}};
}

void rank_table_from_json(const nlohmann::json& doc, const FusionDatum& datum, RankTable& table) {
  if (!doc.is_object() || !doc.contains("ranks") || !doc["ranks"].is_array())
    throw ParseError("rank table document: expected {\"ranks\": [...]}");
  for (const auto& entry : doc["ranks"]) {
    if (!entry.is_array() || entry.size() != 3) throw ParseError("rank table entry must be [g, labels, rank]");
    RankQuery query;
    query.genus = entry[0].get<int>();
    for (const auto& label : entry[1]) query.modules.push_back(datum.index_of(label.get<std::string>()));
    table.store(RankTable::key_for(query), integer_field(entry[2], "rank value"));
  }
}

nlohmann::json parse_json_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ParseError("invalid JSON document");
  return doc;
}

std::string load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string content_hash(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(out);
}

}  // namespace cohft
