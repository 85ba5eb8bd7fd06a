#include "bratteli/classify.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <sstream>

namespace bratteli {

const char* to_string(AlgClass c) {
  switch (c) {
    case AlgClass::graph: return "graph";
    case AlgClass::exel_laca: return "EL";
    case AlgClass::ultragraph: return "ultragraph";
    case AlgClass::rfns: return "RFNS";
  }
  return "?";
}

const char* to_string(Membership m) {
  switch (m) {
    case Membership::member: return "member";
    case Membership::non_member: return "non_member";
    case Membership::unknown: return "unknown";
  }
  return "?";
}

const std::vector<AlgClass>& all_classes() {
  static const std::vector<AlgClass> c{AlgClass::graph, AlgClass::exel_laca, AlgClass::ultragraph, AlgClass::rfns};
  return c;
}

const std::vector<std::string>& descriptor_flags() {
  static const std::vector<std::string> f{"nonzero",
                                          "simple",
                                          "unital",
                                          "finite_dimensional",
                                          "stable",
                                          "commutative",
                                          "commutative_nondiscrete_spectrum",
                                          "has_C_quotient",
                                          "has_findim_quotient",
                                          "has_unital_quotient",
                                          "has_unital_nonTypeI_quotient",
                                          "has_unital_quotient_with_infinitely_many_ideals"};
  return f;
}

bool is_descriptor_flag(const std::string& name) {
  const auto& f = descriptor_flags();
  return std::find(f.begin(), f.end(), name) != f.end();
}

Tri AlgDescriptor::flag(const std::string& f) const {
  auto it = flags.find(f);
  return it == flags.end() ? Tri::unknown : it->second;
}

void AlgDescriptor::set(const std::string& f, Tri v) {
  if (!is_descriptor_flag(f)) throw PreconditionError("unknown descriptor flag " + f);
  if (v == Tri::unknown) flags.erase(f);
  else flags[f] = v;
}

Witness witness_of(const DirectedGraph& g) {
  Witness w{"graph", g.name, false, false};
  if (!g.frontier.empty()) return w;
  w.row_finite = std::none_of(g.edges.begin(), g.edges.end(), [](const GraphEdge& e) { return e.infinite; });
  w.no_sinks = g.sinks().empty();
  return w;
}

Witness witness_of(const Ultragraph& g) {
  if (g.bijective_source()) return {"matrix", g.name, false, false};
  return {"ultragraph", g.name, false, false};
}

Witness witness_of(const ZeroOneMatrix& a) {
  for (const auto& i : a.index) {
    auto it = a.rows.find(i);
    if (it == a.rows.end() || (it->second.cols.empty() && it->second.tails.empty() && !it->second.cofinite))
      throw PreconditionError("matrix row " + i + " is zero; not an Exel-Laca matrix");
  }
  return {"matrix", a.name, false, false};
}

const std::map<std::string, std::string>& rule_labels() {
  static const std::map<std::string, std::string> l{
      {"F1", "finite-dimensional implies unital"},
      {"F2", "unital algebra is its own quotient"},
      {"F3", "C is finite-dimensional"},
      {"F4", "finite-dimensional quotients are unital"},
      {"F5", "obstructing quotients are unital quotients"},
      {"F6", "quotients of stable algebras are stable"},
      {"F7", "quotients of finite-dimensional algebras"},
      {"F8", "simple algebra is its only nonzero quotient"},
      {"F9", "commutative algebras are Type I"},
      {"F10", "M2 unitization is unital"},
      {"R1", "finite-dimensional graph algebra"},
      {"R2", "finite-dimensional obstruction"},
      {"R3", "stable realization"},
      {"R4", "unital-quotient criterion"},
      {"R5", "no finite-dimensional quotient"},
      {"R6", "C-quotient obstruction"},
      {"R7", "Type I obstruction"},
      {"R8", "commutative spectrum obstruction"},
      {"R9", "simple dichotomy"},
      {"R10", "direct-sum closure"},
      {"R11", "row-finite containment"},
      {"R12", "ultragraph containment"},
      {"R13", "witness presentation"},
      {"R14", "sink decomposition shape"},
      {"R15", "M2 unitization"},
      {"R16", "quotient closure"},
  };
  return l;
}

namespace {

std::string ck(AlgClass c) { return std::string("class:") + to_string(c); }

std::string cite(const std::string& id) { return id + " " + rule_labels().at(id); }

const char* show(const std::string& key, Tri v) {
  if (key.rfind("class:", 0) == 0) return v == Tri::yes ? "member" : v == Tri::no ? "non_member" : "unknown";
  return to_string(v);
}

struct Engine {
  std::map<std::string, Tri> val;
  std::map<std::string, std::vector<std::string>> cites;
  std::string rule;
  bool changed = false;

  Tri get(const std::string& key) const {
    auto it = val.find(key);
    return it == val.end() ? Tri::unknown : it->second;
  }
  bool is(const std::string& key, Tri v) const { return get(key) == v; }
  Tri cls(AlgClass c) const { return get(ck(c)); }

  void conclude(const std::string& key, Tri v) {
    if (v == Tri::unknown) return;
    Tri cur = get(key);
    auto& c = cites[key];
    if (cur == Tri::unknown) {
      val[key] = v;
      c.push_back(rule);
      changed = true;
    } else if (cur == v) {
      if (std::find(c.begin(), c.end(), rule) == c.end()) {
        c.push_back(rule);
        changed = true;
      }
    } else {
      throw Inconsistency(key + ": " + rule + " concludes " + show(key, v) + " but " + join(c, ", ") +
                          " concluded " + show(key, cur));
    }
  }
  void member(AlgClass c, bool yes) { conclude(ck(c), yes ? Tri::yes : Tri::no); }
};

using Flags = std::map<std::string, Tri>;

Tri flag_in(const Flags& f, const std::string& k) {
  auto it = f.find(k);
  return it == f.end() ? Tri::unknown : it->second;
}

/// Flags of a direct sum from the (closed) flags of its summands.
Flags lift_flags(const std::vector<Flags>& parts) {
  Flags out;
  auto any_all = [&](const std::string& k, bool any_yes) {
    bool all_yes = true, all_no = true, some_yes = false, some_no = false;
    for (const auto& p : parts) {
      Tri t = flag_in(p, k);
      all_yes = all_yes && t == Tri::yes;
      all_no = all_no && t == Tri::no;
      some_yes = some_yes || t == Tri::yes;
      some_no = some_no || t == Tri::no;
    }
    if (any_yes) {
      if (some_yes) out[k] = Tri::yes;
      else if (all_no) out[k] = Tri::no;
    } else {
      if (all_yes) out[k] = Tri::yes;
      else if (some_no) out[k] = Tri::no;
    }
  };
  for (const char* k : {"nonzero", "has_C_quotient", "has_findim_quotient", "has_unital_quotient",
                        "has_unital_nonTypeI_quotient", "has_unital_quotient_with_infinitely_many_ideals"})
    any_all(k, true);
  for (const char* k : {"unital", "finite_dimensional", "stable", "commutative"}) any_all(k, false);

  bool all_comm = true, some_nondiscrete = false, all_discrete = true, some_noncomm = false;
  for (const auto& p : parts) {
    all_comm = all_comm && flag_in(p, "commutative") == Tri::yes;
    some_noncomm = some_noncomm || flag_in(p, "commutative") == Tri::no;
    some_nondiscrete = some_nondiscrete || flag_in(p, "commutative_nondiscrete_spectrum") == Tri::yes;
    all_discrete = all_discrete && flag_in(p, "commutative_nondiscrete_spectrum") == Tri::no;
  }
  if (all_comm && some_nondiscrete) out["commutative_nondiscrete_spectrum"] = Tri::yes;
  else if (some_noncomm || (all_comm && all_discrete)) out["commutative_nondiscrete_spectrum"] = Tri::no;

  int nonzero = 0;
  for (const auto& p : parts) nonzero += flag_in(p, "nonzero") == Tri::yes;
  if (nonzero >= 2) out["simple"] = Tri::no;
  return out;
}

struct Rule {
  std::string id;
  std::function<void(Engine&)> apply;
};

std::vector<Rule> make_rules(const AlgDescriptor& a, const std::vector<ClassVerdict>& parts,
                             const std::vector<ClassVerdict>& m2) {
  const Tri Y = Tri::yes, N = Tri::no;
  std::vector<Rule> r;
  r.push_back({"F1", [=](Engine& e) {
                 if (e.is("finite_dimensional", Y)) e.conclude("unital", Y);
                 if (e.is("unital", N)) e.conclude("finite_dimensional", N);
               }});
  r.push_back({"F2", [=](Engine& e) {
                 if (e.is("unital", Y) && e.is("nonzero", Y)) e.conclude("has_unital_quotient", Y);
                 if (e.is("has_unital_quotient", N) && e.is("nonzero", Y)) e.conclude("unital", N);
               }});
  r.push_back({"F3", [=](Engine& e) {
                 if (e.is("has_C_quotient", Y)) e.conclude("has_findim_quotient", Y);
                 if (e.is("has_findim_quotient", N)) e.conclude("has_C_quotient", N);
               }});
  r.push_back({"F4", [=](Engine& e) {
                 if (e.is("has_findim_quotient", Y)) e.conclude("has_unital_quotient", Y);
                 if (e.is("has_unital_quotient", N)) e.conclude("has_findim_quotient", N);
               }});
  r.push_back({"F5", [=](Engine& e) {
                 for (const char* k : {"has_unital_nonTypeI_quotient", "has_unital_quotient_with_infinitely_many_ideals"}) {
                   if (e.is(k, Y)) e.conclude("has_unital_quotient", Y);
                   if (e.is("has_unital_quotient", N)) e.conclude(k, N);
                 }
               }});
  r.push_back({"F6", [=](Engine& e) {
                 if (e.is("stable", Y)) e.conclude("has_unital_quotient", N);
                 if (e.is("stable", Y) && e.is("nonzero", Y)) e.conclude("unital", N);
               }});
  r.push_back({"F7", [=](Engine& e) {
                 if (!e.is("finite_dimensional", Y)) return;
                 e.conclude("has_unital_nonTypeI_quotient", N);
                 e.conclude("has_unital_quotient_with_infinitely_many_ideals", N);
                 if (e.is("nonzero", Y)) e.conclude("has_findim_quotient", Y);
               }});
  r.push_back({"F8", [=](Engine& e) {
                 if (!e.is("simple", Y)) return;
                 e.conclude("nonzero", Y);
                 e.conclude("has_unital_quotient", e.get("unital"));
                 e.conclude("unital", e.get("has_unital_quotient"));
                 e.conclude("has_findim_quotient", e.get("finite_dimensional"));
                 e.conclude("finite_dimensional", e.get("has_findim_quotient"));
                 e.conclude("has_unital_quotient_with_infinitely_many_ideals", N);
                 if (e.is("unital", Y) && e.is("finite_dimensional", N)) e.conclude("has_unital_nonTypeI_quotient", Y);
                 if (e.is("unital", N) || e.is("finite_dimensional", Y)) e.conclude("has_unital_nonTypeI_quotient", N);
                 if (e.is("has_unital_nonTypeI_quotient", Y)) e.conclude("finite_dimensional", N);
               }});
  r.push_back({"F9", [=](Engine& e) {
                 if (e.is("commutative_nondiscrete_spectrum", Y)) e.conclude("commutative", Y);
                 if (e.is("commutative", N)) e.conclude("commutative_nondiscrete_spectrum", N);
                 if (e.is("commutative", Y)) e.conclude("has_unital_nonTypeI_quotient", N);
               }});
  if (!m2.empty())
    r.push_back({"F10", [=](Engine& e) {
                   e.conclude("unital", Y);
                   e.conclude("nonzero", Y);
                 }});

  r.push_back({"R1", [=](Engine& e) {
                 if (e.is("finite_dimensional", Y)) e.member(AlgClass::graph, true);
               }});
  r.push_back({"R2", [=](Engine& e) {
                 if (e.is("finite_dimensional", Y) && e.is("nonzero", Y)) e.member(AlgClass::exel_laca, false);
               }});
  r.push_back({"R3", [=](Engine& e) {
                 if (!e.is("stable", Y)) return;
                 e.member(AlgClass::graph, true);
                 e.member(AlgClass::exel_laca, true);
                 e.member(AlgClass::ultragraph, true);
               }});
  r.push_back({"R4", [=](Engine& e) {
                 if (e.is("has_unital_quotient", N)) e.member(AlgClass::rfns, true);
                 if (e.is("has_unital_quotient", Y)) e.member(AlgClass::rfns, false);
               }});
  r.push_back({"R5", [=](Engine& e) {
                 if (e.is("has_findim_quotient", N)) e.member(AlgClass::exel_laca, true);
               }});
  r.push_back({"R6", [=](Engine& e) {
                 if (e.is("has_C_quotient", Y)) e.member(AlgClass::exel_laca, false);
               }});
  r.push_back({"R7", [=](Engine& e) {
                 if (e.is("has_unital_nonTypeI_quotient", Y) ||
                     e.is("has_unital_quotient_with_infinitely_many_ideals", Y))
                   e.member(AlgClass::graph, false);
               }});
  r.push_back({"R8", [=](Engine& e) {
                 if (e.is("commutative_nondiscrete_spectrum", Y)) e.member(AlgClass::ultragraph, false);
               }});
  r.push_back({"R9", [=](Engine& e) {
                 if (!e.is("simple", Y)) return;
                 if (e.is("finite_dimensional", Y)) {
                   e.member(AlgClass::graph, true);
                   e.member(AlgClass::exel_laca, false);
                 } else if (e.is("finite_dimensional", N) && e.is("unital", Y)) {
                   e.member(AlgClass::exel_laca, true);
                   e.member(AlgClass::graph, false);
                 } else if (e.is("finite_dimensional", N) && e.is("unital", N)) {
                   e.member(AlgClass::rfns, true);
                 }
               }});
  if (!parts.empty()) {
    r.push_back({"R10", [=](Engine& e) {
                   for (AlgClass c : {AlgClass::graph, AlgClass::exel_laca, AlgClass::ultragraph}) {
                     bool all = std::all_of(parts.begin(), parts.end(),
                                            [&](const ClassVerdict& p) { return p[c] == Membership::member; });
                     if (all) e.member(c, true);
                   }
                   std::vector<Flags> pf;
                   for (const auto& p : parts) pf.push_back(p.flags);
                   for (const auto& [k, v] : lift_flags(pf)) e.conclude(k, v);
                 }});
    r.push_back({"R14", [=](Engine& e) {
                   bool shape = std::all_of(parts.begin(), parts.end(), [](const ClassVerdict& p) {
                     return flag_in(p.flags, "finite_dimensional") == Tri::yes ||
                            flag_in(p.flags, "has_unital_quotient") == Tri::no;
                   });
                   if (shape) e.member(AlgClass::graph, true);
                 }});
    r.push_back({"R16", [=](Engine& e) {
                   for (const auto& p : parts)
                     if (p[AlgClass::graph] == Membership::non_member) e.member(AlgClass::graph, false);
                 }});
  }
  r.push_back({"R11", [=](Engine& e) {
                 if (e.cls(AlgClass::rfns) == Y) {
                   e.member(AlgClass::graph, true);
                   e.member(AlgClass::exel_laca, true);
                 }
                 if (e.cls(AlgClass::graph) == N || e.cls(AlgClass::exel_laca) == N) e.member(AlgClass::rfns, false);
               }});
  r.push_back({"R12", [=](Engine& e) {
                 if (e.cls(AlgClass::graph) == Y || e.cls(AlgClass::exel_laca) == Y) e.member(AlgClass::ultragraph, true);
                 if (e.cls(AlgClass::ultragraph) == N) {
                   e.member(AlgClass::graph, false);
                   e.member(AlgClass::exel_laca, false);
                 }
               }});
  if (!a.witnesses.empty())
    r.push_back({"R13", [=](Engine& e) {
                   for (const auto& w : a.witnesses) {
                     if (w.kind == "graph") {
                       e.member(AlgClass::graph, true);
                       if (w.row_finite && w.no_sinks) e.member(AlgClass::rfns, true);
                     } else if (w.kind == "ultragraph") {
                       e.member(AlgClass::ultragraph, true);
                     } else if (w.kind == "matrix") {
                       e.member(AlgClass::exel_laca, true);
                     }
                   }
                 }});
  if (!m2.empty())
    r.push_back({"R15", [=](Engine& e) {
                   if (m2[0][AlgClass::exel_laca] == Membership::member) e.member(AlgClass::exel_laca, true);
                   if (m2[0][AlgClass::ultragraph] == Membership::member) e.member(AlgClass::ultragraph, true);
                 }});
  return r;
}

}  // namespace

ClassVerdict classify(const AlgDescriptor& a, ClassifyOptions opt) {
  for (const auto& w : a.witnesses)
    if (w.kind != "graph" && w.kind != "ultragraph" && w.kind != "matrix")
      throw PreconditionError("unknown witness kind " + w.kind);
  if (a.m2_unitization_of.size() > 1) throw PreconditionError("at most one M2 unitization source");

  std::vector<ClassVerdict> parts, m2;
  for (const auto& s : a.summands) parts.push_back(classify(s, opt));
  for (const auto& s : a.m2_unitization_of) m2.push_back(classify(s, opt));

  Engine e;
  for (const auto& [k, v] : a.flags) {
    if (!is_descriptor_flag(k)) throw PreconditionError("unknown descriptor flag " + k);
    if (v == Tri::unknown) continue;
    e.val[k] = v;
    e.cites[k] = {"asserted"};
  }

  std::vector<Rule> rules = make_rules(a, parts, m2);
  std::vector<std::size_t> order(rules.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(opt.shuffle_seed.value_or(0));
  do {
    e.changed = false;
    if (opt.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i : order) {
      e.rule = rules[i].id;
      rules[i].apply(e);
    }
  } while (e.changed);

  ClassVerdict v;
  for (AlgClass c : all_classes()) {
    Tri t = e.cls(c);
    v.status[c] = t == Tri::yes ? Membership::member : t == Tri::no ? Membership::non_member : Membership::unknown;
    std::vector<std::string> ids = e.cites[ck(c)];
    std::sort(ids.begin(), ids.end(), [](const std::string& x, const std::string& y) {
      return std::stoi(x.substr(1)) < std::stoi(y.substr(1));
    });
    for (const auto& id : ids) v.citations[c].push_back(cite(id));
  }
  for (const auto& f : descriptor_flags()) {
    Tri t = e.get(f);
    v.flags[f] = t;
    if (t == Tri::unknown) continue;
    std::vector<std::string> ids = e.cites[f];
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids) v.flag_citations[f].push_back(id == "asserted" ? id : cite(id));
  }
  return v;
}

std::string ClassVerdict::to_text() const {
  std::ostringstream os;
  for (AlgClass c : all_classes()) {
    os << to_string(c) << ": " << to_string(status.at(c));
    auto it = citations.find(c);
    if (it != citations.end() && !it->second.empty()) os << " [" << join(it->second, "; ") << "]";
    os << "\n";
  }
  return os.str();
}

AlgDescriptor combine_direct_sum(const std::vector<AlgDescriptor>& parts) {
  if (parts.empty()) throw PreconditionError("direct sum of an empty list");
  if (parts.size() == 1) return parts.front();
  AlgDescriptor out;
  std::vector<std::string> names;
  std::vector<Flags> closed;
  for (const auto& p : parts) {
    names.push_back(p.name);
    closed.push_back(classify(p).flags);
  }
  out.name = join(names, "+");
  out.summands = parts;
  for (const auto& [k, v] : lift_flags(closed)) out.set(k, v);
  return out;
}

AlgDescriptor derive_descriptor(const Diagram& d, int depth) {
  require_valid(d);
  AlgDescriptor a;
  a.name = d.name;
  a.set("nonzero", Tri::yes);
  QuotientProperties q = check_quotient_properties(d, depth);
  a.set("has_C_quotient", q.has_C.value);
  a.set("has_findim_quotient", q.has_findim.value);
  a.set("has_unital_quotient", q.has_unital.value);
  if (d.tail) {
    const PeriodicTail& t = *d.tail;
    bool unital = true, iso = true;
    for (int ph = 0; ph < t.period; ++ph) {
      int n = t.from + ph;
      DimVector s = surplus(d, n);
      for (Eigen::Index j = 0; j < s.size(); ++j) unital = unital && s(j) == 0;
      const MultMatrix& m = d.matrix(n);
      if (m.rows() != m.cols()) iso = false;
      for (Eigen::Index j = 0; j < m.cols() && iso; ++j) {
        BigInt col = 0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) col += m(i, j);
        iso = col == 1;
      }
    }
    iso = iso && unital;
    a.set("unital", unital ? Tri::yes : Tri::no);
    a.set("finite_dimensional", iso ? Tri::yes : Tri::no);
  }
  return a;
}

}  // namespace bratteli
