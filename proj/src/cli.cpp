#include "bratteli/cli.hpp"

#include "bratteli/classify.hpp"
#include "bratteli/dsl.hpp"
#include "bratteli/findim.hpp"
#include "bratteli/random.hpp"
#include "bratteli/realize.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace bratteli {

namespace {

using json = nlohmann::ordered_json;

json big(const BigInt& x) {
  if (x >= std::numeric_limits<long long>::min() && x <= std::numeric_limits<long long>::max())
    return x.convert_to<long long>();
  return x.str();
}

json to_json(const Diagram& d) {
  json j;
  j["kind"] = "diagram";
  j["name"] = d.name;
  j["levels"] = json::array();
  for (int n = 1; n <= d.depth(); ++n) {
    json vs = json::array();
    for (const auto& v : d.level(n).vertices) vs.push_back({{"id", v.id}, {"dim", big(v.dim)}});
    j["levels"].push_back({{"level", n}, {"vertices", vs}});
  }
  j["edges"] = json::array();
  for (int n = 1; n < d.depth(); ++n) {
    const MultMatrix& m = d.matrix(n);
    for (Eigen::Index a = 0; a < m.rows(); ++a)
      for (Eigen::Index b = 0; b < m.cols(); ++b)
        if (m(a, b) != 0)
          j["edges"].push_back({{"level", n},
                                {"source", d.level(n).vertices[static_cast<std::size_t>(a)].id},
                                {"target", d.level(n + 1).vertices[static_cast<std::size_t>(b)].id},
                                {"mult", big(m(a, b))}});
  }
  if (d.tail) j["periodic"] = {{"from", d.tail->from}, {"period", d.tail->period}};
  return j;
}

json to_json(const RangeSet& r) {
  return {{"cofinite", r.cofinite}, {"members", r.members}, {"tails", r.tails}};
}

json to_json(const DirectedGraph& g) {
  json j;
  j["kind"] = "graph";
  j["name"] = g.name;
  j["vertices"] = g.vertices;
  j["edges"] = json::array();
  for (const auto& e : g.edges)
    j["edges"].push_back({{"id", e.id}, {"source", e.source}, {"target", e.target}, {"infinite", e.infinite}});
  j["frontier"] = json::object();
  for (const auto& [v, k] : g.frontier) j["frontier"][v] = k == FrontierKind::open ? "open" : "recurring-sinks";
  return j;
}

json to_json(const Ultragraph& g) {
  json j;
  j["kind"] = "ultragraph";
  j["name"] = g.name;
  j["vertices"] = g.vertices;
  j["edges"] = json::array();
  for (const auto& e : g.edges) j["edges"].push_back({{"id", e.id}, {"source", e.source}, {"range", to_json(e.range)}});
  return j;
}

json to_json(const ZeroOneMatrix& a) {
  json j;
  j["kind"] = "matrix";
  j["name"] = a.name;
  j["index"] = a.index;
  j["rows"] = json::object();
  for (const auto& i : a.index) {
    auto it = a.rows.find(i);
    if (it == a.rows.end()) continue;
    j["rows"][i] = {{"cofinite", it->second.cofinite}, {"cols", it->second.cols}, {"tails", it->second.tails}};
  }
  return j;
}

json to_json(const AlgDescriptor& a) {
  json j;
  j["kind"] = "descriptor";
  j["name"] = a.name;
  j["flags"] = json::object();
  for (const auto& f : descriptor_flags())
    if (a.flag(f) != Tri::unknown) j["flags"][f] = to_string(a.flag(f));
  j["witnesses"] = json::array();
  for (const auto& w : a.witnesses)
    j["witnesses"].push_back({{"kind", w.kind}, {"name", w.name}, {"row_finite", w.row_finite}, {"no_sinks", w.no_sinks}});
  j["summands"] = json::array();
  for (const auto& s : a.summands) j["summands"].push_back(to_json(s));
  if (!a.m2_unitization_of.empty()) j["m2unitization"] = to_json(a.m2_unitization_of.front());
  return j;
}

json to_json(const Document& doc) {
  switch (doc.kind) {
    case DocKind::diagram: {
      json j = to_json(doc.diagram);
      if (doc.injections) j["injections"] = *doc.injections;
      return j;
    }
    case DocKind::graph: return to_json(doc.graph);
    case DocKind::ultragraph: {
      json j = to_json(doc.ultragraph);
      if (doc.provenance) {
        const Provenance& p = *doc.provenance;
        json deltas = json::object();
        for (const auto& [v, x] : p.deltas) deltas[v] = big(x);
        json origin = json::object();
        for (const auto& [x, o] : p.origin) origin[x] = {{"vertex", o.vertex}, {"level", o.level}, {"index", o.index}};
        j["provenance"] = {{"depth", p.depth}, {"deltas", deltas}, {"injections", p.injections}, {"origin", origin}};
      }
      return j;
    }
    case DocKind::matrix: return to_json(doc.matrix);
    case DocKind::descriptor: return to_json(doc.descriptor);
  }
  return {};
}

json to_json(const VerificationReport& r) {
  json j;
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"pass", c.pass}, {"detail", c.detail}});
  j["levels"] = json::array();
  for (const auto& l : r.levels) j["levels"].push_back({{"level", l.level}, {"pass", l.pass}, {"detail", l.detail}});
  j["result"] = r.pass() ? "PASS" : "FAIL";
  return j;
}

json to_json(const ClassVerdict& v) {
  json j;
  j["classes"] = json::object();
  for (AlgClass c : all_classes()) {
    json cit = json::array();
    auto it = v.citations.find(c);
    if (it != v.citations.end()) cit = it->second;
    j["classes"][to_string(c)] = {{"status", to_string(v.status.at(c))}, {"citations", cit}};
  }
  j["flags"] = json::object();
  for (const auto& [f, t] : v.flags) j["flags"][f] = to_string(t);
  return j;
}

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
  std::string format = "text";
  std::string input;
  bool json() const { return format == "json"; }
};

std::string read_input(Context& ctx) {
  std::ostringstream ss;
  if (ctx.input.empty() || ctx.input == "-") {
    ss << ctx.in.rdbuf();
  } else {
    std::ifstream f(ctx.input);
    if (!f) throw PreconditionError("cannot open " + ctx.input);
    ss << f.rdbuf();
  }
  return ss.str();
}

Document read_doc(Context& ctx, std::initializer_list<DocKind> kinds) {
  Document doc = parse(read_input(ctx));
  for (DocKind k : kinds)
    if (doc.kind == k) return doc;
  std::vector<std::string> names;
  for (DocKind k : kinds) names.push_back(to_string(k));
  throw ParseError("expected a " + join(names, " or ") + " document, got " + to_string(doc.kind), 1, 1);
}

void emit(Context& ctx, const Document& doc) {
  if (ctx.json()) ctx.out << to_json(doc).dump(2) << "\n";
  else ctx.out << print(doc);
}

/// Diagram with its location-annotated issues; exit 1 when invalid.
int cmd_validate(Context& ctx) {
  Document doc = read_doc(ctx, {DocKind::diagram, DocKind::graph, DocKind::ultragraph, DocKind::matrix,
                                DocKind::descriptor});
  if (doc.kind != DocKind::diagram) {
    if (ctx.json()) ctx.out << json{{"kind", to_string(doc.kind)}, {"valid", true}}.dump(2) << "\n";
    else ctx.out << "valid " << to_string(doc.kind) << "\n";
    return exit_ok;
  }
  ValidationReport r = validate_diagram(doc.diagram);
  if (ctx.json()) {
    json j{{"kind", "diagram"}, {"valid", r.valid()}, {"issues", json::array()}, {"notes", r.notes}};
    for (const auto& i : r.issues) {
      Span s = doc.span_of(i.vertex.empty() ? "level " + std::to_string(i.level) : "vertex " + i.vertex);
      j["issues"].push_back({{"level", i.level}, {"vertex", i.vertex}, {"message", i.message}, {"line", s.line},
                             {"column", s.column}});
    }
    ctx.out << j.dump(2) << "\n";
  } else {
    for (const auto& i : r.issues) {
      Span s = doc.span_of(i.vertex.empty() ? "level " + std::to_string(i.level) : "vertex " + i.vertex);
      if (s.line) ctx.out << "line " << s.line << ", column " << s.column << ": ";
      ctx.out << "level " << i.level << (i.vertex.empty() ? "" : " vertex " + i.vertex) << ": " << i.message << "\n";
    }
    for (const auto& n : r.notes) ctx.out << "note " << n << "\n";
    ctx.out << (r.valid() ? "valid" : "invalid") << "\n";
  }
  return r.valid() ? exit_ok : exit_fail;
}

Diagram valid_diagram(Context& ctx) {
  Document doc = read_doc(ctx, {DocKind::diagram});
  require_valid(doc.diagram);
  return doc.diagram;
}

int emit_report(Context& ctx, const VerificationReport& r) {
  if (ctx.json()) ctx.out << to_json(r).dump(2) << "\n";
  else ctx.out << r.to_text();
  return r.pass() ? exit_ok : exit_fail;
}

void print_tri(Context& ctx, json& j, const std::string& name, const TriResult& t) {
  j[name] = {{"value", to_string(t.value)}, {"reason", t.reason}};
  if (!ctx.json()) {
    ctx.out << name << " " << to_string(t.value);
    if (!t.reason.empty()) ctx.out << " (" << t.reason << ")";
    ctx.out << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  Context ctx{out, err, in, "text", ""};
  CLI::App app{"Bratteli diagram toolkit", "bratteli"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::uint64_t> seed;
  std::size_t limit = 1u << 16;
  app.add_option("--format", ctx.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", seed, "Seed for generated inputs");
  app.add_option("--limit", limit, "Enumeration cap");

  auto input = [&](CLI::App* sub) { sub->add_option("input", ctx.input, "Input file, default standard input"); };

  int status = exit_ok;

  auto* validate = app.add_subcommand("validate", "Check a document");
  input(validate);
  validate->callback([&] { status = cmd_validate(ctx); });

  std::vector<int> keep;
  auto* telescope_cmd = app.add_subcommand("telescope", "Keep the listed levels, composing the rest");
  telescope_cmd->add_option("--keep", keep, "Levels to keep, e.g. 1,3")->delimiter(',')->allow_extra_args(false)->required();
  input(telescope_cmd);
  telescope_cmd->callback([&] { emit(ctx, make_document(telescope(valid_diagram(ctx), keep))); });

  auto* trim = app.add_subcommand("trim", "Remove dimension-one vertices");
  input(trim);
  trim->callback([&] { emit(ctx, make_document(trim_dimension_one(valid_diagram(ctx)))); });

  std::string mode = "fd";
  int max_depth = 12;
  auto* normalize = app.add_subcommand("normalize", "Telescope into realizable or strict form");
  normalize->add_option("--mode", mode, "fd or unital")->check(CLI::IsMember({"fd", "unital"}));
  normalize->add_option("--max-depth", max_depth, "Deepest level examined");
  input(normalize);
  normalize->callback([&] {
    Diagram d = valid_diagram(ctx);
    emit(ctx, make_document(mode == "fd" ? normalize_fd(d, max_depth) : normalize_unital(d, max_depth)));
  });

  int depth = 3;
  bool row_finite = false;
  auto* realize = app.add_subcommand("realize", "Build the ultragraph of a diagram");
  realize->add_option("--depth", depth, "Levels to realize");
  realize->add_flag("--row-finite", row_finite, "Emit the row-finite graph instead");
  input(realize);
  realize->callback([&] {
    Document doc = read_doc(ctx, {DocKind::diagram});
    require_valid(doc.diagram);
    if (row_finite) {
      emit(ctx, make_document(realize_row_finite(doc.diagram, depth)));
    } else {
      RealizedUltragraph r = doc.injections ? build_ultragraph(doc.diagram, depth, *doc.injections)
                                            : build_ultragraph(doc.diagram, depth);
      emit(ctx, make_document(r));
    }
  });

  bool adjacency = false;
  auto* to_matrix = app.add_subcommand("to-matrix", "Edge matrix of a graph or matrix of an ultragraph");
  to_matrix->add_flag("--adjacency", adjacency, "Vertex adjacency matrix of a graph");
  input(to_matrix);
  to_matrix->callback([&] {
    Document doc = read_doc(ctx, {DocKind::graph, DocKind::ultragraph});
    if (doc.kind == DocKind::graph)
      emit(ctx, make_document(adjacency ? graph_to_adjacency_matrix(doc.graph) : graph_to_edge_matrix(doc.graph)));
    else
      emit(ctx, make_document(ultragraph_to_matrix(doc.ultragraph)));
  });

  auto* expand = app.add_subcommand("expand", "Graph of an ultragraph, or dual graph of a matrix");
  input(expand);
  expand->callback([&] {
    Document doc = read_doc(ctx, {DocKind::ultragraph, DocKind::matrix});
    emit(ctx, make_document(doc.kind == DocKind::ultragraph ? expand_ultragraph_to_graph(doc.ultragraph)
                                                            : matrix_to_dual_graph(doc.matrix)));
  });

  auto* m2 = app.add_subcommand("m2-unitize", "Ultragraph of M_2 of the unitization");
  input(m2);
  m2->callback([&] {
    Document doc = read_doc(ctx, {DocKind::ultragraph, DocKind::matrix, DocKind::graph});
    Ultragraph g = doc.kind == DocKind::ultragraph ? doc.ultragraph
                   : doc.kind == DocKind::matrix   ? matrix_to_ultragraph(doc.matrix)
                                                   : collapse_graph_to_ultragraph(doc.graph);
    emit(ctx, make_document(m2_unitize(g)));
  });

  auto* sinks = app.add_subcommand("decompose-sinks", "Split off the finite-dimensional summands of sinks");
  input(sinks);
  sinks->callback([&] {
    Document doc = read_doc(ctx, {DocKind::graph});
    SinkDecomposition s = decompose_sinks(doc.graph);
    if (ctx.json()) {
      json j;
      j["summands"] = json::array();
      for (const auto& f : s.finite) j["summands"].push_back({{"sink", f.sink}, {"size", big(f.paths)}});
      j["compact"] = s.compact;
      j["residual"] = to_json(s.residual);
      ctx.out << j.dump(2) << "\n";
    } else {
      for (const auto& f : s.finite) ctx.out << "# summand " << f.sink << " M_" << f.paths.str() << "\n";
      for (const auto& c : s.compact) ctx.out << "# compact " << c << "\n";
      ctx.out << print(s.residual);
    }
  });

  auto* simulate = app.add_subcommand("simulate", "Recover the diagram from a realized ultragraph");
  simulate->add_option("--depth", depth, "Levels to recover")->required();
  input(simulate);
  simulate->callback([&] {
    Document doc = read_doc(ctx, {DocKind::ultragraph});
    if (!doc.provenance) throw PreconditionError("ultragraph has no origin lines to simulate from");
    FinDimTower t = simulate_direct_limit(doc.ultragraph, doc.provenance->origin, depth);
    emit(ctx, make_document(tower_to_diagram(t, doc.ultragraph.name)));
  });

  auto* verify = app.add_subcommand("verify", "Realize, simulate and compare level by level");
  verify->add_option("--depth", depth, "Levels to compare")->required();
  verify->add_flag("--row-finite", row_finite, "Go through the row-finite graph presentation");
  input(verify);
  verify->callback([&] {
    Document doc = read_doc(ctx, {DocKind::diagram});
    require_valid(doc.diagram);
    if (row_finite) status = emit_report(ctx, verify_row_finite(doc.diagram, depth));
    else if (doc.injections) status = emit_report(ctx, verify_roundtrip(doc.diagram, depth, *doc.injections));
    else status = emit_report(ctx, verify_roundtrip(doc.diagram, depth));
  });

  int classify_depth = 8;
  auto* classify_cmd = app.add_subcommand("classify", "Class memberships of a descriptor or diagram");
  classify_cmd->add_option("--depth", classify_depth, "Depth used when deriving flags from a diagram");
  input(classify_cmd);
  classify_cmd->callback([&] {
    Document doc = read_doc(ctx, {DocKind::descriptor, DocKind::diagram});
    AlgDescriptor a = doc.kind == DocKind::descriptor ? doc.descriptor : derive_descriptor(doc.diagram, classify_depth);
    ClassVerdict v = classify(a);
    if (ctx.json()) ctx.out << to_json(v).dump(2) << "\n";
    else ctx.out << v.to_text();
  });

  int chain_n = 2;
  auto* chain = app.add_subcommand("find-chain", "Chain v_1..v_n with v_{k+1} in r(e_{v_k})");
  chain->add_option("--n", chain_n, "Chain length")->required();
  input(chain);
  chain->callback([&] {
    Document doc = read_doc(ctx, {DocKind::ultragraph, DocKind::matrix});
    Ultragraph g = doc.kind == DocKind::ultragraph ? doc.ultragraph : matrix_to_ultragraph(doc.matrix);
    ChainResult r = find_mn_chain(g, chain_n);
    if (ctx.json()) ctx.out << json{{"found", to_string(r.found)}, {"chain", r.chain}}.dump(2) << "\n";
    else ctx.out << "chain " << to_string(r.found) << (r.chain.empty() ? "" : ": " + join(r.chain, " ")) << "\n";
    if (r.found == Tri::unknown) status = exit_unknown;
  });

  auto* cycle = app.add_subcommand("find-cycle", "Cycle in a graph, ultragraph or matrix");
  input(cycle);
  cycle->callback([&] {
    Document doc = read_doc(ctx, {DocKind::graph, DocKind::ultragraph, DocKind::matrix});
    CycleResult r = doc.kind == DocKind::graph        ? find_cycle(doc.graph)
                    : doc.kind == DocKind::ultragraph ? find_cycle(doc.ultragraph)
                                                      : find_cycle(doc.matrix);
    if (ctx.json()) ctx.out << json{{"cycle", to_string(r.has_cycle)}, {"path", r.cycle}}.dump(2) << "\n";
    else ctx.out << "cycle " << to_string(r.has_cycle) << (r.cycle.empty() ? "" : ": " + join(r.cycle, " ")) << "\n";
    if (r.has_cycle == Tri::unknown) status = exit_unknown;
  });

  int window = 1;
  auto* quotients = app.add_subcommand("quotients", "Saturated hereditary sets and quotient properties");
  quotients->add_option("--depth", depth, "Levels to enumerate")->required();
  quotients->add_option("--window", window, "Levels searched for certificates");
  input(quotients);
  quotients->callback([&] {
    Diagram d = valid_diagram(ctx);
    std::vector<HereditaryEntry> sets = enumerate_hereditary_sets(d, depth, limit);
    QuotientProperties q = check_quotient_properties(d, depth, {window});
    json j;
    j["sets"] = json::array();
    for (const auto& e : sets) {
      std::vector<std::string> ids = e.set.vertex_ids(d);
      j["sets"].push_back({{"set", ids}, {"quotient", to_json(e.quotient)}});
      if (!ctx.json()) ctx.out << "hereditary {" << join(ids, " ") << "}\n";
    }
    print_tri(ctx, j, "has_C_quotient", q.has_C);
    print_tri(ctx, j, "has_findim_quotient", q.has_findim);
    print_tri(ctx, j, "has_unital_quotient", q.has_unital);
    if (ctx.json()) ctx.out << j.dump(2) << "\n";
  });

  std::string kind = "realizable";
  auto* generate = app.add_subcommand("generate", "Random test input");
  generate->add_option("--kind", kind, "Input family")
      ->check(CLI::IsMember({"realizable", "strict", "generic", "tailed", "graph", "descriptor"}));
  input(generate);
  generate->callback([&] {
    std::mt19937_64 rng(seed.value_or(0));
    RandomDiagramOptions opt;
    if (kind == "strict") opt.family = DiagramFamily::strict;
    if (kind == "generic") opt.family = DiagramFamily::generic;
    if (kind == "graph") emit(ctx, make_document(random_acyclic_graph(rng)));
    else if (kind == "descriptor") emit(ctx, make_document(random_descriptor(rng, 2)));
    else if (kind == "tailed") emit(ctx, make_document(random_tailed_diagram(rng, opt)));
    else emit(ctx, make_document(random_diagram(rng, opt)));
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UnknownAtDepth& e) {
    err << "unknown at depth: " << e.what();
    if (!e.witness().empty()) err << " [" << join(e.witness(), " ") << "]";
    err << "\n";
    return exit_unknown;
  } catch (const Inconsistency& e) {
    err << "inconsistent: " << e.what() << "\n";
    return exit_fail;
  } catch (const PreconditionError& e) {
    err << "precondition: " << e.what() << "\n";
    return exit_fail;
  } catch (const LimitExceeded& e) {
    err << "limit exceeded: " << e.what() << "\n";
    return exit_fail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  }
  return status;
}

}  // namespace bratteli
