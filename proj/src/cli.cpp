#include "cohft/cli.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cohft/cache.hpp"
#include "cohft/serialize.hpp"

namespace cohft {

namespace {

using nlohmann::json;

struct DatumSource {
  std::string datum_file;
  std::string lattice_file;
};

struct LoadedDatum {
  FusionDatum datum;
  std::string canonical_text;  // canonical serialization, used as cache key material
};

LoadedDatum load_datum(const DatumSource& source) {
  if (source.datum_file.empty() == source.lattice_file.empty())
    throw StructureError("exactly one of --datum and --lattice is required");
  if (!source.datum_file.empty()) {
    json doc = parse_json_text(load_file(source.datum_file));
    FusionDatum datum(fusion_data_from_json(doc));
    std::string canonical = fusion_datum_to_json(datum).dump();
    return {std::move(datum), std::move(canonical)};
  }
  json doc = parse_json_text(load_file(source.lattice_file));
  FusionDatum datum = fusion_datum_from_gram(gram_from_json(doc));
  std::string canonical = fusion_datum_to_json(datum).dump();
  return {std::move(datum), std::move(canonical)};
}

std::vector<int> resolve_modules(const FusionDatum& datum, const std::string& csv) {
  std::vector<int> modules;
  if (csv.empty()) return modules;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) modules.push_back(datum.index_of(item));
  return modules;
}

std::vector<std::string> module_labels(const FusionDatum& datum, const std::vector<int>& modules) {
  std::vector<std::string> labels;
  labels.reserve(modules.size());
  for (int m : modules) labels.push_back(datum.label(m));
  return labels;
}

std::optional<Cache> open_cache(const std::string& flag_value) {
  if (!flag_value.empty()) return Cache(flag_value);
  if (const char* env = std::getenv("COHFT_CACHE"); env && *env) return Cache(env);
  return std::nullopt;
}

std::string graph_pretty(const StableGraph& graph) {
  if (graph.num_edges() == 0 && graph.num_vertices() == 1) return "smooth";
  std::ostringstream os;
  os << "{g=[";
  for (int v = 0; v < graph.num_vertices(); ++v) os << (v ? "," : "") << graph.vertex_genus[v];
  os << "]";
  if (graph.num_legs() > 0) {
    os << "; legs=[";
    for (int i = 0; i < graph.num_legs(); ++i)
      os << (i ? "," : "") << (i + 1) << ":" << graph.leg_vertex[i];
    os << "]";
  }
  if (graph.num_edges() > 0) {
    os << "; edges=[";
    for (int e = 0; e < graph.num_edges(); ++e)
      os << (e ? "," : "") << "(" << graph.edges[e][0] << "-" << graph.edges[e][1] << ")";
    os << "]";
  }
  os << "}";
  return os.str();
}

std::string term_pretty(const TautClass::Term& term) {
  std::ostringstream os;
  os << "(" << rational_to_string(term.coeff) << ")";
  bool printed = false;
  if (term.gen.lambda_exp > 0) {
    os << " lambda";
    if (term.gen.lambda_exp > 1) os << "^" << term.gen.lambda_exp;
    printed = true;
  }
  for (int i = 0; i < static_cast<int>(term.gen.psi_leg.size()); ++i) {
    if (term.gen.psi_leg[i] == 0) continue;
    os << " psi_" << (i + 1);
    if (term.gen.psi_leg[i] > 1) os << "^" << term.gen.psi_leg[i];
    printed = true;
  }
  for (int h = 0; h < static_cast<int>(term.gen.psi_half.size()); ++h) {
    if (term.gen.psi_half[h] == 0) continue;
    os << " psi(" << h / 2 << ":" << h % 2 << ")";
    if (term.gen.psi_half[h] > 1) os << "^" << term.gen.psi_half[h];
    printed = true;
  }
  if (!printed) os << " 1";
  os << "  @ " << graph_pretty(term.gen.graph);
  return os.str();
}

void print_class(std::ostream& out, const TautClass& cls) {
  if (cls.is_zero()) {
    out << "  0\n";
    return;
  }
  for (const auto& [key, term] : cls.terms()) out << "  " << term_pretty(term) << "\n";
}

int run_fusion_check(const DatumSource& source, bool machine, std::ostream& out, std::ostream& err) {
  json doc = parse_json_text(load_file(source.datum_file));
  FusionData data = fusion_data_from_json(doc);
  auto report = validate(data);
  if (machine) {
    json violations = json::array();
    for (const auto& v : report) violations.push_back(v.format());
    out << json{{"command", "fusion-check"}, {"valid", report.empty()}, {"violations", violations}}.dump()
        << "\n";
  } else if (report.empty()) {
    out << "ok: all fusion axioms hold (" << data.labels.size() << " modules)\n";
  }
  if (!report.empty()) {
    for (const auto& v : report) err << "E-AXIOM " << v.format() << "\n";
    return 1;
  }
  return 0;
}

int run_lattice_info(const std::string& lattice_file, bool machine, std::ostream& out,
                     std::ostream& err) {
  json doc = parse_json_text(load_file(lattice_file));
  GramLattice lattice = gram_from_json(doc);
  auto gram_report = validate_gram(lattice);
  if (!gram_report.empty()) {
    for (const auto& v : gram_report) err << "E-AXIOM " << v.format() << "\n";
    return 1;
  }
  DiscriminantData disc = discriminant_group(lattice);
  FusionDatum datum = fusion_datum_from_gram(lattice);
  if (machine) {
    json divisors = json::array();
    for (const auto& d : disc.elementary_divisors) divisors.push_back(d.get_str());
    json modules = json::array();
    for (int i = 0; i < disc.order(); ++i) {
      json coset = json::array();
      for (const auto& c : disc.coset_reps[i]) coset.push_back(rational_to_string(c));
      modules.push_back(json{{"label", disc.labels[i]},
                             {"conformal_dimension", rational_to_string(datum.conf_dim(i))},
                             {"coset", coset}});
    }
    out << json{{"command", "lattice-info"},
                {"rank", lattice.rank()},
                {"determinant", gram_determinant(lattice).get_str()},
                {"elementary_divisors", divisors},
                {"central_charge", rational_to_string(datum.central_charge())},
                {"modules", modules},
                {"datum", fusion_datum_to_json(datum)}}
               .dump()
        << "\n";
    return 0;
  }
  out << "rank " << lattice.rank() << ", determinant " << gram_determinant(lattice).get_str()
      << ", central charge " << rational_to_string(datum.central_charge()) << "\n";
  out << "discriminant group: ";
  if (disc.elementary_divisors.empty()) {
    out << "trivial\n";
  } else {
    for (std::size_t i = 0; i < disc.elementary_divisors.size(); ++i)
      out << (i ? " x " : "") << "Z/" << disc.elementary_divisors[i].get_str();
    out << "\n";
  }
  out << "simple modules:\n";
  for (int i = 0; i < disc.order(); ++i) {
    out << "  " << disc.labels[i] << "  a=" << rational_to_string(datum.conf_dim(i)) << "  coset=(";
    for (std::size_t c = 0; c < disc.coset_reps[i].size(); ++c)
      out << (c ? "," : "") << rational_to_string(disc.coset_reps[i][c]);
    out << ")\n";
  }
  return 0;
}

int run_graphs(int genus, int legs, int max_edges, bool machine,
               const std::optional<Cache>& cache, std::ostream& out, std::ostream& err) {
  (void)err;
  std::string cache_key =
      "graphs_g" + std::to_string(genus) + "_n" + std::to_string(legs) +
      (max_edges >= 0 ? "_e" + std::to_string(max_edges) : "");

  json graphs_doc;
  bool have = false;
  if (cache) {
    if (auto payload = cache->get(cache_key)) {
      try {
        json parsed = parse_json_text(*payload);
        if (parsed.at("genus") == genus && parsed.at("n") == legs) {
          graphs_doc = std::move(parsed);
          have = true;
        }
      } catch (const std::exception&) {
        // corrupt entry: recompute below
      }
    }
  }
  if (!have) {
    auto graphs = enumerate_stable_graphs(genus, legs, max_edges);
    json records = json::array();
    for (const auto& eg : graphs)
      records.push_back(json{{"graph", graph_to_json(eg.graph)}, {"aut_order", eg.aut}});
    graphs_doc = json{{"genus", genus}, {"n", legs}, {"count", records.size()}, {"graphs", records}};
    if (cache) cache->put(cache_key, graphs_doc.dump());
  }

  if (machine) {
    json output = graphs_doc;
    output["command"] = "graphs";
    out << output.dump() << "\n";
    return 0;
  }
  out << graphs_doc["count"].get<std::size_t>() << " stable graphs of genus " << genus << " with "
      << legs << " legs\n";
  int index = 0;
  for (const auto& record : graphs_doc["graphs"]) {
    StableGraph graph = graph_from_json(record["graph"]);
    out << "  #" << index++ << " aut=" << record["aut_order"].get<std::uint64_t>() << " "
        << graph_pretty(graph) << "\n";
  }
  return 0;
}

void load_rank_cache(const std::optional<Cache>& cache, const std::string& key,
                     const FusionDatum& datum, RankTable& table) {
  if (!cache) return;
  if (auto payload = cache->get(key)) {
    try {
      rank_table_from_json(parse_json_text(*payload), datum, table);
    } catch (const std::exception&) {
      // corrupt entry: ignored, recomputed values will overwrite it
    }
  }
}

int run_rank(const DatumSource& source, int genus, const std::string& modules_csv, bool oracle,
             bool machine, const std::optional<Cache>& cache, std::ostream& out, std::ostream& err) {
  LoadedDatum loaded = load_datum(source);
  std::vector<int> modules = resolve_modules(loaded.datum, modules_csv);
  RankQuery query{genus, modules};

  RankTable table;
  std::string cache_key = "ranks_" + content_hash(loaded.canonical_text);
  load_rank_cache(cache, cache_key, loaded.datum, table);

  Integer rank = rank_exact(loaded.datum, query, table);
  if (cache) cache->put(cache_key, rank_table_to_json(table, loaded.datum).dump());

  std::optional<RankCrosscheck> check;
  if (oracle) {
    SemisimpleData ss = semisimple_decomposition(loaded.datum);
    check = rank_crosscheck(loaded.datum, ss, query, table);
  }

  if (machine) {
    json doc{{"command", "rank"},
             {"genus", genus},
             {"modules", module_labels(loaded.datum, modules)},
             {"rank", rank.get_str()}};
    if (check) {
      doc["oracle"] = json{{"value", check->semisimple},
                           {"abs_error", check->abs_error},
                           {"tol", check->tol},
                           {"ok", check->ok}};
    }
    out << doc.dump() << "\n";
  } else {
    out << rank.get_str() << "\n";
    if (check)
      out << "oracle " << check->semisimple << " abs_error " << check->abs_error << " tol "
          << check->tol << (check->ok ? " ok" : " MISMATCH") << "\n";
  }
  if (check && !check->ok) {
    err << "semisimple oracle disagrees with the exact rank beyond tolerance\n";
    return 1;
  }
  return 0;
}

int run_chern(const DatumSource& source, int genus, const std::string& modules_csv, int degree,
              bool smooth, bool machine, std::ostream& out, std::ostream& err) {
  (void)err;
  LoadedDatum loaded = load_datum(source);
  std::vector<int> modules = resolve_modules(loaded.datum, modules_csv);
  const int n = static_cast<int>(modules.size());
  if (degree < 0) degree = std::max(0, 3 * genus - 3 + n);

  RankTable table;
  TautClass cls = smooth ? chern_smooth(loaded.datum, genus, modules, degree, table)
                         : chern_character(loaded.datum, genus, modules, degree, table);

  if (machine) {
    out << json{{"command", "chern"},
                {"genus", genus},
                {"modules", module_labels(loaded.datum, modules)},
                {"degree", degree},
                {"smooth", smooth},
                {"class", class_document(cls)}}
               .dump()
        << "\n";
  } else {
    out << (smooth ? "chern character on the smooth locus" : "chern character") << " of V_" << genus
        << "(" << modules_csv << ") truncated at degree " << degree << ":\n";
    print_class(out, cls);
  }
  return 0;
}

int run_c1(const DatumSource& source, int genus, const std::string& modules_csv, bool machine,
           std::ostream& out, std::ostream& err) {
  LoadedDatum loaded = load_datum(source);
  std::vector<int> modules = resolve_modules(loaded.datum, modules_csv);

  RankTable table;
  TautClass closed = first_chern_closed_form(loaded.datum, genus, modules, table);
  TautClass from_polynomial =
      degree_part(chern_character(loaded.datum, genus, modules, 1, table), 1);
  bool agree = closed == from_polynomial;

  if (machine) {
    out << json{{"command", "c1"},
                {"genus", genus},
                {"modules", module_labels(loaded.datum, modules)},
                {"closed_form", class_document(closed)},
                {"degree_one", class_document(from_polynomial)},
                {"agree", agree}}
               .dump()
        << "\n";
  } else {
    out << "closed form:\n";
    print_class(out, closed);
    out << "degree-1 part of the stable-graph polynomial:\n";
    print_class(out, from_polynomial);
    out << (agree ? "AGREE\n" : "DISAGREE\n");
  }
  if (!agree) {
    err << "first Chern class closed form disagrees with the stable-graph polynomial\n";
    return 1;
  }
  return 0;
}

}  // namespace

int parse_and_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coinvariant-bundle ranks and Chern characters from fusion data"};
  app.require_subcommand(1);

  int threads = 0;
  std::string cache_flag;
  app.add_option("--threads", threads, "Bound internal parallelism");
  app.add_option("--cache", cache_flag, "Cache directory (or set COHFT_CACHE)");

  DatumSource source;
  int genus = 0, legs = 0, degree = -1, max_edges = -1;
  std::string modules_csv;
  bool machine = false, oracle = false, smooth = false, json_flag = false, pretty_flag = false;

  auto add_datum_options = [&](CLI::App* cmd) {
    cmd->add_option("--datum", source.datum_file, "Fusion datum file");
    cmd->add_option("--lattice", source.lattice_file, "Even lattice Gram file");
  };

  CLI::App* cmd_fusion = app.add_subcommand("fusion-check", "Validate the Frobenius axioms of a fusion datum");
  cmd_fusion->add_option("--datum", source.datum_file, "Fusion datum file")->required();
  cmd_fusion->add_flag("--machine", machine, "Machine-readable output");

  CLI::App* cmd_lattice = app.add_subcommand("lattice-info", "Discriminant data of an even lattice");
  cmd_lattice->add_option("--lattice", source.lattice_file, "Even lattice Gram file")->required();
  cmd_lattice->add_flag("--machine", machine, "Machine-readable output");

  CLI::App* cmd_graphs = app.add_subcommand("graphs", "Enumerate stable graphs of genus g with n legs");
  cmd_graphs->add_option("--genus", genus, "Genus")->required();
  cmd_graphs->add_option("--n", legs, "Number of legs")->required();
  cmd_graphs->add_option("--max-edges", max_edges, "Restrict to graphs with at most this many edges");
  cmd_graphs->add_flag("--machine", machine, "Machine-readable output");

  CLI::App* cmd_rank = app.add_subcommand("rank", "Exact rank of a coinvariant bundle");
  add_datum_options(cmd_rank);
  cmd_rank->add_option("--genus", genus, "Genus")->required();
  cmd_rank->add_option("--modules", modules_csv, "Comma-separated module labels");
  cmd_rank->add_flag("--oracle", oracle, "Also evaluate the semisimple TQFT oracle");
  cmd_rank->add_flag("--machine", machine, "Machine-readable output");

  CLI::App* cmd_chern = app.add_subcommand("chern", "Chern character as a tautological class");
  add_datum_options(cmd_chern);
  cmd_chern->add_option("--genus", genus, "Genus")->required();
  cmd_chern->add_option("--modules", modules_csv, "Comma-separated module labels");
  cmd_chern->add_option("--degree", degree, "Truncation degree (default: dim of the moduli space)");
  cmd_chern->add_flag("--smooth", smooth, "Restrict to the smooth locus");
  cmd_chern->add_flag("--json", json_flag, "Machine-readable output");
  cmd_chern->add_flag("--pretty", pretty_flag, "Human-readable output (default)");

  CLI::App* cmd_c1 = app.add_subcommand("c1", "First Chern class: closed form vs. stable-graph polynomial");
  add_datum_options(cmd_c1);
  cmd_c1->add_option("--genus", genus, "Genus")->required();
  cmd_c1->add_option("--modules", modules_csv, "Comma-separated module labels");
  cmd_c1->add_flag("--machine", machine, "Machine-readable output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  if (threads > 0) omp_set_num_threads(threads);
  auto cache = open_cache(cache_flag);

  try {
    if (app.got_subcommand(cmd_fusion)) return run_fusion_check(source, machine, out, err);
    if (app.got_subcommand(cmd_lattice)) return run_lattice_info(source.lattice_file, machine, out, err);
    if (app.got_subcommand(cmd_graphs)) return run_graphs(genus, legs, max_edges, machine, cache, out, err);
    if (app.got_subcommand(cmd_rank))
      return run_rank(source, genus, modules_csv, oracle, machine, cache, out, err);
    if (app.got_subcommand(cmd_chern))
      return run_chern(source, genus, modules_csv, degree, smooth, json_flag && !pretty_flag, out, err);
    if (app.got_subcommand(cmd_c1)) return run_c1(source, genus, modules_csv, machine, out, err);
  } catch (const ParseError& e) {
    err << "E-PARSE " << e.what() << "\n";
    return 1;
  } catch (const LabelError& e) {
    err << "E-LABEL " << e.what() << "\n";
    return 1;
  } catch (const StabilityError& e) {
    err << "E-STABILITY " << e.what() << "\n";
    return 1;
  } catch (const AxiomError& e) {
    for (const auto& v : e.violations) err << "E-AXIOM " << v << "\n";
    return 1;
  } catch (const StructureError& e) {
    err << "E-PARSE " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "usage error: no command given\n";
  return 2;
}

}  // namespace cohft
