#include "bratteli/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace bratteli {

const char* to_string(DocKind k) {
  switch (k) {
    case DocKind::diagram: return "diagram";
    case DocKind::graph: return "graph";
    case DocKind::ultragraph: return "ultragraph";
    case DocKind::matrix: return "matrix";
    case DocKind::descriptor: return "descriptor";
  }
  return "?";
}

Span Document::span_of(const std::string& key) const {
  auto it = spans.find(key);
  return it == spans.end() ? Span{} : it->second;
}

namespace {

struct Tok {
  std::string s;
  int col = 0;
};

struct Line {
  int no = 0;
  std::vector<Tok> toks;
  int end_col = 1;
};

bool special(char c) { return c == '{' || c == '}' || c == ':' || c == '=' || c == ','; }

std::vector<Line> lex(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  int no = 0;
  while (std::getline(is, raw)) {
    ++no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    Line l;
    l.no = no;
    l.end_col = static_cast<int>(raw.size()) + 1;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t start = i;
      if (special(raw[i])) {
        ++i;
      } else {
        while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])) && !special(raw[i])) ++i;
      }
      l.toks.push_back({raw.substr(start, i - start), static_cast<int>(start) + 1});
    }
    if (!l.toks.empty()) out.push_back(std::move(l));
  }
  return out;
}

[[noreturn]] void fail(const Line& l, std::size_t i, const std::string& msg) {
  int col = i < l.toks.size() ? l.toks[i].col : l.end_col;
  throw ParseError(msg, l.no, col);
}

struct Cursor {
  const Line& l;
  std::size_t i = 0;

  bool done() const { return i >= l.toks.size(); }
  const std::string& peek() const {
    static const std::string empty;
    return done() ? empty : l.toks[i].s;
  }
  std::string take(const std::string& what) {
    if (done()) fail(l, i, "expected " + what);
    return l.toks[i++].s;
  }
  void expect(const std::string& s) {
    if (done() || l.toks[i].s != s) fail(l, i, "expected '" + s + "'");
    ++i;
  }
  void end() {
    if (!done()) fail(l, i, "unexpected '" + l.toks[i].s + "'");
  }
  Span span() const { return {l.no, done() ? l.end_col : l.toks[i].col}; }
};

bool is_ident(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || special(c)) return false;
  return s.find("->") == std::string::npos && s[0] != '+' && s[0] != '*';
}

std::string ident(Cursor& c, const std::string& what) {
  std::size_t at = c.i;
  std::string s = c.take(what);
  if (!is_ident(s)) fail(c.l, at, "invalid " + what + " '" + s + "'");
  return s;
}

BigInt number(Cursor& c, const std::string& what) {
  std::size_t at = c.i;
  std::string s = c.take(what);
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
    fail(c.l, at, what + " must be a nonnegative integer, got '" + s + "'");
  return BigInt(s);
}

long small_number(Cursor& c, const std::string& what) {
  std::size_t at = c.i;
  BigInt x = number(c, what);
  if (x > 1000000000) fail(c.l, at, what + " is too large");
  return x.convert_to<long>();
}

Tri tri(Cursor& c) {
  std::size_t at = c.i;
  std::string s = c.take("yes, no or unknown");
  if (s == "yes") return Tri::yes;
  if (s == "no") return Tri::no;
  if (s == "unknown") return Tri::unknown;
  fail(c.l, at, "expected yes, no or unknown, got '" + s + "'");
}

bool tail_token(const std::string& s, std::string* id) {
  if (s.rfind("+tail(", 0) != 0 || s.size() < 8 || s.back() != ')') return false;
  *id = s.substr(6, s.size() - 7);
  return true;
}

/// `{a b}` or `{* except a b}` followed by any number of +tail(x).
RangeSet range(Cursor& c) {
  RangeSet r;
  c.expect("{");
  if (c.peek() == "*") {
    c.i++;
    r.cofinite = true;
    if (c.peek() == "except") c.i++;
  }
  while (!c.done() && c.peek() != "}") r.members.insert(ident(c, "vertex"));
  c.expect("}");
  while (!c.done()) {
    std::string id;
    if (!tail_token(c.peek(), &id) || id.empty()) break;
    c.i++;
    r.tails.insert(id);
  }
  return r;
}

void header(const Line& l, Document& doc, std::string* name) {
  Cursor c{l};
  std::string kind = c.take("document kind");
  if (kind == "diagram") doc.kind = DocKind::diagram;
  else if (kind == "graph") doc.kind = DocKind::graph;
  else if (kind == "ultragraph") doc.kind = DocKind::ultragraph;
  else if (kind == "matrix") doc.kind = DocKind::matrix;
  else if (kind == "descriptor") doc.kind = DocKind::descriptor;
  else fail(l, 0, "unknown document kind '" + kind + "'");
  if (!c.done()) *name = ident(c, "name");
  c.end();
}

struct EdgeEntry {
  int level;
  std::string src, dst;
  BigInt mult;
  const Line* line;
  std::size_t at;
};

void parse_diagram_body(const std::vector<Line>& lines, Document& doc) {
  std::map<int, std::pair<Level, const Line*>> levels;
  std::vector<EdgeEntry> entries;
  std::optional<std::pair<int, int>> periodic;
  const Line* periodic_line = nullptr;
  std::vector<std::pair<std::string, std::pair<std::vector<long>, const Line*>>> injects;
  std::map<std::string, int> level_of;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    Cursor c{l};
    std::string kw = c.take("keyword");
    if (kw == "level") {
      std::size_t at = c.i;
      int n = static_cast<int>(small_number(c, "level number"));
      if (n < 1) fail(l, at, "levels start at 1");
      if (levels.count(n)) fail(l, at, "level " + std::to_string(n) + " declared twice");
      c.expect(":");
      Level lvl;
      while (!c.done()) {
        std::size_t vat = c.i;
        std::string id = ident(c, "vertex id");
        c.expect("=");
        std::size_t dat = c.i;
        BigInt d = number(c, "dimension");
        if (d < 1) fail(l, dat, "dimension must be at least 1");
        if (level_of.count(id)) fail(l, vat, "vertex " + id + " declared twice");
        level_of[id] = n;
        doc.spans["vertex " + id] = {l.no, l.toks[vat].col};
        lvl.vertices.push_back({id, d});
      }
      if (lvl.vertices.empty()) fail(l, c.i, "level has no vertices");
      doc.spans["level " + std::to_string(n)] = {l.no, l.toks[0].col};
      levels[n] = {lvl, &l};
    } else if (kw == "edges") {
      std::size_t at = c.i;
      int n = static_cast<int>(small_number(c, "level number"));
      if (n < 1) fail(l, at, "levels start at 1");
      c.expect(":");
      doc.spans["edges " + std::to_string(n)] = {l.no, l.toks[0].col};
      while (!c.done()) {
        std::size_t eat = c.i;
        std::string tok = c.take("edge");
        std::size_t arrow = tok.find("->");
        if (arrow == std::string::npos || arrow == 0 || arrow + 2 >= tok.size())
          fail(l, eat, "expected src->dst, got '" + tok + "'");
        BigInt mult = 1;
        if (c.peek() == ":") {
          c.i++;
          mult = number(c, "multiplicity");
        }
        entries.push_back({n, tok.substr(0, arrow), tok.substr(arrow + 2), mult, &l, eat});
      }
    } else if (kw == "periodic") {
      c.expect("from");
      int from = static_cast<int>(small_number(c, "level number"));
      c.expect("period");
      std::size_t pat = c.i;
      int p = static_cast<int>(small_number(c, "period"));
      if (p < 1) fail(l, pat, "period must be at least 1");
      c.end();
      if (periodic) fail(l, 0, "periodic declared twice");
      periodic = {from, p};
      periodic_line = &l;
    } else if (kw == "inject") {
      std::string v = ident(c, "vertex id");
      c.expect(":");
      std::vector<long> labels;
      while (!c.done()) labels.push_back(small_number(c, "label"));
      injects.push_back({v, {labels, &l}});
    } else {
      fail(l, 0, "unknown diagram statement '" + kw + "'");
    }
  }

  if (levels.empty()) fail(lines[0], 1, "diagram has no levels");
  int depth = levels.rbegin()->first;
  for (int n = 1; n <= depth; ++n)
    if (!levels.count(n)) fail(*levels.upper_bound(n)->second.second, 1, "level " + std::to_string(n) + " is missing");
  Diagram& d = doc.diagram;
  for (int n = 1; n <= depth; ++n) d.add_level(levels[n].first);
  for (int n = 1; n < depth; ++n)
    d.set_matrix(n, zero_matrix(static_cast<Eigen::Index>(d.level(n).size()),
                                static_cast<Eigen::Index>(d.level(n + 1).size())));
  auto index_in = [&](int n, const std::string& id) -> Eigen::Index {
    const auto& vs = d.level(n).vertices;
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (vs[i].id == id) return static_cast<Eigen::Index>(i);
    return -1;
  };
  for (const auto& e : entries) {
    if (e.level >= depth) fail(*e.line, e.at, "edges " + std::to_string(e.level) + " need level " +
                                                 std::to_string(e.level + 1));
    Eigen::Index i = index_in(e.level, e.src);
    Eigen::Index j = index_in(e.level + 1, e.dst);
    if (i < 0) fail(*e.line, e.at, "vertex " + e.src + " is not on level " + std::to_string(e.level));
    if (j < 0) fail(*e.line, e.at, "vertex " + e.dst + " is not on level " + std::to_string(e.level + 1));
    MultMatrix m = d.matrix(e.level);
    if (m(i, j) != 0) fail(*e.line, e.at, "edge " + e.src + "->" + e.dst + " listed twice");
    m(i, j) = e.mult;
    d.set_matrix(e.level, m);
  }
  if (periodic) {
    auto [from, p] = *periodic;
    if (from < 1 || from + p != depth)
      fail(*periodic_line, 0, "periodic tail must end at the last level (from + period = " + std::to_string(depth) + ")");
    d.tail = make_tail(d, from, p);
    doc.spans["periodic"] = {periodic_line->no, 1};
  }
  if (!injects.empty()) {
    InjectionTable k;
    for (const auto& [v, lab] : injects) {
      if (!level_of.count(v)) fail(*lab.second, 1, "inject names unknown vertex " + v);
      if (k.count(v)) fail(*lab.second, 1, "inject for " + v + " given twice");
      k[v] = lab.first;
    }
    doc.injections = k;
  }
}

void parse_graph_body(const std::vector<Line>& lines, Document& doc) {
  DirectedGraph& g = doc.graph;
  std::set<std::string> verts, edge_ids;
  struct Pending {
    const Line* line;
    std::size_t at;
    std::string name;
  };
  std::vector<Pending> refs;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    Cursor c{l};
    std::string kw = c.take("keyword");
    if (kw == "vertex") {
      while (!c.done()) {
        std::size_t at = c.i;
        std::string v = ident(c, "vertex id");
        if (!verts.insert(v).second) fail(l, at, "vertex " + v + " declared twice");
        g.vertices.push_back(v);
        doc.spans["vertex " + v] = {l.no, l.toks[at].col};
      }
    } else if (kw == "edge") {
      std::size_t at = c.i;
      GraphEdge e;
      e.id = ident(c, "edge id");
      if (!edge_ids.insert(e.id).second) fail(l, at, "edge " + e.id + " declared twice");
      c.expect(":");
      refs.push_back({&l, c.i, ""});
      e.source = ident(c, "source");
      refs.back().name = e.source;
      c.expect("->");
      bool braces = c.peek() == "{";
      if (braces) c.i++;
      refs.push_back({&l, c.i, ""});
      e.target = ident(c, "target");
      refs.back().name = e.target;
      if (braces) c.expect("}");
      if (c.peek() == "*inf") {
        c.i++;
        e.infinite = true;
      }
      c.end();
      doc.spans["edge " + e.id] = {l.no, l.toks[0].col};
      g.edges.push_back(e);
    } else if (kw == "frontier") {
      refs.push_back({&l, c.i, ""});
      std::string v = ident(c, "vertex id");
      refs.back().name = v;
      std::size_t at = c.i;
      std::string kind = c.take("frontier kind");
      if (kind == "open") g.frontier[v] = FrontierKind::open;
      else if (kind == "recurring-sinks") g.frontier[v] = FrontierKind::recurring_sinks;
      else fail(l, at, "frontier kind must be open or recurring-sinks");
      c.end();
    } else {
      fail(l, 0, "unknown graph statement '" + kw + "'");
    }
  }
  for (const auto& r : refs)
    if (!verts.count(r.name)) fail(*r.line, r.at, "unknown vertex " + r.name);
}

void parse_ultragraph_body(const std::vector<Line>& lines, Document& doc) {
  Ultragraph& g = doc.ultragraph;
  std::set<std::string> verts, edge_ids;
  struct Pending {
    const Line* line;
    std::size_t at;
    std::string name;
    bool edge;
  };
  std::vector<Pending> refs;
  Provenance prov;
  bool has_prov = false;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    Cursor c{l};
    std::string kw = c.take("keyword");
    if (kw == "vertex") {
      while (!c.done()) {
        std::size_t at = c.i;
        std::string v = ident(c, "vertex id");
        if (!verts.insert(v).second) fail(l, at, "vertex " + v + " declared twice");
        g.vertices.push_back(v);
        doc.spans["vertex " + v] = {l.no, l.toks[at].col};
      }
    } else if (kw == "edge") {
      std::size_t at = c.i;
      UltraEdge e;
      e.id = ident(c, "edge id");
      if (!edge_ids.insert(e.id).second) fail(l, at, "edge " + e.id + " declared twice");
      c.expect(":");
      refs.push_back({&l, c.i, "", false});
      e.source = ident(c, "source");
      refs.back().name = e.source;
      c.expect("->");
      std::size_t rat = c.i;
      e.range = range(c);
      c.end();
      for (const auto& v : e.range.members) refs.push_back({&l, rat, v, false});
      for (const auto& t : e.range.tails) refs.push_back({&l, rat, t, true});
      if (e.range.empty()) fail(l, rat, "range of " + e.id + " is empty");
      doc.spans["edge " + e.id] = {l.no, l.toks[0].col};
      g.edges.push_back(e);
    } else if (kw == "depth") {
      prov.depth = static_cast<int>(small_number(c, "depth"));
      c.end();
      has_prov = true;
    } else if (kw == "delta") {
      while (!c.done()) {
        std::string v = ident(c, "vertex id");
        c.expect("=");
        prov.deltas[v] = number(c, "delta");
      }
      has_prov = true;
    } else if (kw == "inject") {
      std::string v = ident(c, "vertex id");
      c.expect(":");
      std::vector<long> labels;
      while (!c.done()) labels.push_back(small_number(c, "label"));
      prov.injections[v] = labels;
      has_prov = true;
    } else if (kw == "origin") {
      refs.push_back({&l, c.i, "", false});
      std::string x = ident(c, "vertex id");
      refs.back().name = x;
      c.expect(":");
      VertexOrigin o;
      o.vertex = ident(c, "diagram vertex");
      o.level = static_cast<int>(small_number(c, "level"));
      o.index = small_number(c, "index");
      c.end();
      prov.origin[x] = o;
      has_prov = true;
    } else {
      fail(l, 0, "unknown ultragraph statement '" + kw + "'");
    }
  }
  for (const auto& r : refs) {
    if (r.edge && !edge_ids.count(r.name)) fail(*r.line, r.at, "tail refers to unknown edge " + r.name);
    if (!r.edge && !verts.count(r.name)) fail(*r.line, r.at, "unknown vertex " + r.name);
  }
  if (has_prov) {
    for (const auto& [v, delta] : prov.deltas) prov.injections.try_emplace(v);
    doc.provenance = prov;
  }
}

void parse_matrix_body(const std::vector<Line>& lines, Document& doc) {
  ZeroOneMatrix& a = doc.matrix;
  std::vector<std::string> declared;
  std::vector<std::string> seen_order;
  std::set<std::string> seen;
  struct Pending {
    const Line* line;
    std::size_t at;
    std::string name;
  };
  std::vector<Pending> refs;
  auto note = [&](const std::string& x) {
    if (seen.insert(x).second) seen_order.push_back(x);
  };
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const Line& l = lines[li];
    Cursor c{l};
    std::string kw = c.take("keyword");
    if (kw == "index") {
      while (!c.done()) {
        std::size_t at = c.i;
        std::string x = ident(c, "index");
        if (std::find(declared.begin(), declared.end(), x) != declared.end()) fail(l, at, "index " + x + " declared twice");
        declared.push_back(x);
      }
    } else if (kw == "row") {
      std::size_t at = c.i;
      std::string i = ident(c, "row index");
      if (a.rows.count(i)) fail(l, at, "row " + i + " declared twice");
      refs.push_back({&l, at, i});
      note(i);
      c.expect(":");
      MatrixRow row;
      if (c.peek() == "*") {
        c.i++;
        row.cofinite = true;
        if (c.peek() == "except") c.i++;
      }
      while (!c.done()) {
        std::size_t jat = c.i;
        std::string tok = c.peek();
        std::string t;
        if (tail_token(tok, &t)) {
          c.i++;
          row.tails.insert(t);
          refs.push_back({&l, jat, t});
          note(t);
          continue;
        }
        std::string j = ident(c, "column index");
        row.cols.insert(j);
        refs.push_back({&l, jat, j});
        note(j);
      }
      doc.spans["row " + i] = {l.no, l.toks[0].col};
      a.rows[i] = row;
    } else {
      fail(l, 0, "unknown matrix statement '" + kw + "'");
    }
  }
  if (!declared.empty()) {
    a.index = declared;
    std::set<std::string> idx(declared.begin(), declared.end());
    for (const auto& r : refs)
      if (!idx.count(r.name)) fail(*r.line, r.at, r.name + " is not in the index");
  } else {
    a.index = seen_order;
  }
  for (const auto& i : a.index) a.rows[i];
}

std::size_t parse_descriptor_block(const std::vector<Line>& lines, std::size_t li, AlgDescriptor& a, Document& doc,
                                   bool nested) {
  for (; li < lines.size(); ++li) {
    const Line& l = lines[li];
    Cursor c{l};
    std::string kw = c.take("keyword");
    if (kw == "}") {
      if (!nested) fail(l, 0, "unmatched '}'");
      c.end();
      return li;
    }
    if (kw == "flag") {
      std::size_t at = c.i;
      std::string f = c.take("flag name");
      if (!is_descriptor_flag(f)) fail(l, at, "unknown flag '" + f + "'");
      c.expect("=");
      Tri v = tri(c);
      c.end();
      a.set(f, v);
      if (!nested) doc.spans["flag " + f] = {l.no, l.toks[0].col};
    } else if (kw == "witness") {
      Witness w;
      std::size_t at = c.i;
      w.kind = c.take("witness kind");
      if (w.kind != "graph" && w.kind != "ultragraph" && w.kind != "matrix")
        fail(l, at, "witness kind must be graph, ultragraph or matrix");
      w.name = ident(c, "witness name");
      while (!c.done()) {
        std::size_t pat = c.i;
        std::string p = c.take("property");
        if (p == "row-finite") w.row_finite = true;
        else if (p == "no-sinks") w.no_sinks = true;
        else fail(l, pat, "unknown witness property '" + p + "'");
      }
      a.witnesses.push_back(w);
    } else if (kw == "summand" || kw == "m2unitization") {
      AlgDescriptor child;
      if (c.peek() != "{") child.name = ident(c, "name");
      c.expect("{");
      c.end();
      std::size_t close = parse_descriptor_block(lines, li + 1, child, doc, true);
      if (close >= lines.size()) fail(l, 0, "block is not closed");
      if (kw == "summand") a.summands.push_back(child);
      else {
        if (!a.m2_unitization_of.empty()) fail(l, 0, "m2unitization given twice");
        a.m2_unitization_of.push_back(child);
      }
      li = close;
    } else {
      fail(l, 0, "unknown descriptor statement '" + kw + "'");
    }
  }
  return li;
}

}  // namespace

Document parse(const std::string& text) {
  std::vector<Line> lines = lex(text);
  if (lines.empty()) throw ParseError("empty document", 1, 1);
  Document doc;
  std::string name;
  header(lines[0], doc, &name);
  switch (doc.kind) {
    case DocKind::diagram:
      parse_diagram_body(lines, doc);
      if (!name.empty()) doc.diagram.name = name;
      break;
    case DocKind::graph:
      parse_graph_body(lines, doc);
      if (!name.empty()) doc.graph.name = name;
      break;
    case DocKind::ultragraph:
      parse_ultragraph_body(lines, doc);
      if (!name.empty()) doc.ultragraph.name = name;
      break;
    case DocKind::matrix:
      parse_matrix_body(lines, doc);
      if (!name.empty()) doc.matrix.name = name;
      break;
    case DocKind::descriptor:
      parse_descriptor_block(lines, 1, doc.descriptor, doc, false);
      if (!name.empty()) doc.descriptor.name = name;
      break;
  }
  return doc;
}

Diagram parse_diagram(const std::string& text) {
  Document d = parse(text);
  if (d.kind != DocKind::diagram) throw ParseError("expected a diagram document", 1, 1);
  return d.diagram;
}

namespace {

void print_ids(std::ostringstream& os, const std::string& kw, const std::vector<std::string>& ids) {
  for (std::size_t i = 0; i < ids.size(); i += 16) {
    os << kw;
    for (std::size_t j = i; j < std::min(ids.size(), i + 16); ++j) os << " " << ids[j];
    os << "\n";
  }
}

std::string range_text(const RangeSet& r) {
  std::string s = "{";
  std::vector<std::string> parts;
  if (r.cofinite) parts.push_back("* except");
  for (const auto& m : r.members) parts.push_back(m);
  s += join(parts, " ") + "}";
  for (const auto& t : r.tails) s += " +tail(" + t + ")";
  return s;
}

void print_injections(std::ostringstream& os, const InjectionTable& k, const std::vector<std::string>& order) {
  std::set<std::string> done;
  auto line = [&](const std::string& v, const std::vector<long>& labels) {
    if (labels.empty()) return;
    os << "inject " << v << ":";
    for (long x : labels) os << " " << x;
    os << "\n";
  };
  for (const auto& v : order) {
    auto it = k.find(v);
    if (it == k.end()) continue;
    line(v, it->second);
    done.insert(v);
  }
  for (const auto& [v, labels] : k)
    if (!done.count(v)) line(v, labels);
}

void print_descriptor(std::ostringstream& os, const AlgDescriptor& a, const std::string& indent) {
  for (const auto& f : descriptor_flags()) {
    Tri t = a.flag(f);
    if (t != Tri::unknown) os << indent << "flag " << f << " = " << to_string(t) << "\n";
  }
  for (const auto& w : a.witnesses) {
    os << indent << "witness " << w.kind << " " << w.name;
    if (w.row_finite) os << " row-finite";
    if (w.no_sinks) os << " no-sinks";
    os << "\n";
  }
  for (const auto& s : a.summands) {
    os << indent << "summand " << s.name << " {\n";
    print_descriptor(os, s, indent + "  ");
    os << indent << "}\n";
  }
  for (const auto& s : a.m2_unitization_of) {
    os << indent << "m2unitization " << s.name << " {\n";
    print_descriptor(os, s, indent + "  ");
    os << indent << "}\n";
  }
}

}  // namespace

std::string print(const Diagram& d) {
  std::ostringstream os;
  os << "diagram " << d.name << "\n";
  for (int n = 1; n <= d.depth(); ++n) {
    os << "level " << n << ":";
    for (const auto& v : d.level(n).vertices) os << " " << v.id << "=" << v.dim.str();
    os << "\n";
  }
  for (int n = 1; n < d.depth(); ++n) {
    const MultMatrix& m = d.matrix(n);
    os << "edges " << n << ":";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0)
          os << " " << d.level(n).vertices[static_cast<std::size_t>(i)].id << "->"
             << d.level(n + 1).vertices[static_cast<std::size_t>(j)].id << ":" << m(i, j).str();
    os << "\n";
  }
  if (d.tail) os << "periodic from " << d.tail->from << " period " << d.tail->period << "\n";
  return os.str();
}

std::string print(const DirectedGraph& g) {
  std::ostringstream os;
  os << "graph " << g.name << "\n";
  print_ids(os, "vertex", g.vertices);
  for (const auto& e : g.edges)
    os << "edge " << e.id << ": " << e.source << " -> {" << e.target << "}" << (e.infinite ? " *inf" : "") << "\n";
  for (const auto& v : g.vertices) {
    auto it = g.frontier.find(v);
    if (it != g.frontier.end())
      os << "frontier " << v << " " << (it->second == FrontierKind::open ? "open" : "recurring-sinks") << "\n";
  }
  return os.str();
}

std::string print(const Ultragraph& g) {
  std::ostringstream os;
  os << "ultragraph " << g.name << "\n";
  print_ids(os, "vertex", g.vertices);
  for (const auto& e : g.edges) os << "edge " << e.id << ": " << e.source << " -> " << range_text(e.range) << "\n";
  return os.str();
}

std::string print(const ZeroOneMatrix& a) {
  std::ostringstream os;
  os << "matrix " << a.name << "\n";
  print_ids(os, "index", a.index);
  for (const auto& i : a.index) {
    auto it = a.rows.find(i);
    if (it == a.rows.end()) continue;
    const MatrixRow& r = it->second;
    os << "row " << i << ":";
    if (r.cofinite) os << " * except";
    for (const auto& j : a.index)
      if (r.cols.count(j)) os << " " << j;
    for (const auto& j : r.cols)
      if (std::find(a.index.begin(), a.index.end(), j) == a.index.end()) os << " " << j;
    for (const auto& t : r.tails) os << " +tail(" << t << ")";
    os << "\n";
  }
  return os.str();
}

std::string print(const AlgDescriptor& a) {
  std::ostringstream os;
  os << "descriptor " << a.name << "\n";
  print_descriptor(os, a, "");
  return os.str();
}

std::string print(const Document& doc) {
  switch (doc.kind) {
    case DocKind::diagram: {
      std::ostringstream os;
      os << print(doc.diagram);
      if (doc.injections) {
        std::vector<std::string> order;
        for (const auto& l : doc.diagram.levels)
          for (const auto& v : l.vertices) order.push_back(v.id);
        print_injections(os, *doc.injections, order);
      }
      return os.str();
    }
    case DocKind::graph: return print(doc.graph);
    case DocKind::ultragraph: {
      std::ostringstream os;
      os << print(doc.ultragraph);
      if (doc.provenance) {
        const Provenance& p = *doc.provenance;
        if (p.depth) os << "depth " << p.depth << "\n";
        std::vector<std::string> order;
        for (const auto& x : doc.ultragraph.vertices) {
          auto it = p.origin.find(x);
          if (it != p.origin.end() && std::find(order.begin(), order.end(), it->second.vertex) == order.end())
            order.push_back(it->second.vertex);
        }
        for (const auto& [v, delta] : p.deltas)
          if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
        std::vector<std::string> parts;
        for (const auto& v : order) {
          auto it = p.deltas.find(v);
          if (it != p.deltas.end()) parts.push_back(v + "=" + it->second.str());
        }
        for (std::size_t i = 0; i < parts.size(); i += 16) {
          os << "delta";
          for (std::size_t j = i; j < std::min(parts.size(), i + 16); ++j) os << " " << parts[j];
          os << "\n";
        }
        print_injections(os, p.injections, order);
        for (const auto& x : doc.ultragraph.vertices) {
          auto it = p.origin.find(x);
          if (it != p.origin.end())
            os << "origin " << x << ": " << it->second.vertex << " " << it->second.level << " " << it->second.index
               << "\n";
        }
      }
      return os.str();
    }
    case DocKind::matrix: return print(doc.matrix);
    case DocKind::descriptor: return print(doc.descriptor);
  }
  return "";
}

Document make_document(const Diagram& d) {
  Document doc;
  doc.kind = DocKind::diagram;
  doc.diagram = d;
  return doc;
}

Document make_document(const DirectedGraph& g) {
  Document doc;
  doc.kind = DocKind::graph;
  doc.graph = g;
  return doc;
}

Document make_document(const Ultragraph& g) {
  Document doc;
  doc.kind = DocKind::ultragraph;
  doc.ultragraph = g;
  return doc;
}

Document make_document(const RealizedUltragraph& g) {
  Document doc = make_document(g.graph);
  Provenance p;
  p.depth = g.depth;
  p.deltas = g.deltas;
  p.injections = g.injections;
  p.origin = g.origin;
  doc.provenance = p;
  return doc;
}

Document make_document(const ZeroOneMatrix& a) {
  Document doc;
  doc.kind = DocKind::matrix;
  doc.matrix = a;
  return doc;
}

Document make_document(const AlgDescriptor& a) {
  Document doc;
  doc.kind = DocKind::descriptor;
  doc.descriptor = a;
  return doc;
}

}  // namespace bratteli
