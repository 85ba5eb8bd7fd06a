#include "bratteli/findim.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SparseCore>

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace bratteli {

BigInt FinDimShape::total() const {
  BigInt s = 0;
  for (const auto& x : dims) s += x;
  return s;
}

Amalgamation amalgamate(const FinDimShape& b, const FinDimShape& c, const MultMatrix& q) {
  const auto nb = static_cast<Eigen::Index>(b.size());
  const auto nc = static_cast<Eigen::Index>(c.size());
  if (q.rows() != nb || q.cols() != nc) throw PreconditionError("amalgamate: rank matrix has the wrong shape");
  for (const auto& x : b.dims)
    if (x < 1) throw PreconditionError("amalgamate: block dimensions must be positive");
  for (const auto& x : c.dims)
    if (x < 1) throw PreconditionError("amalgamate: block dimensions must be positive");
  for (Eigen::Index v = 0; v < nb; ++v) {
    bool any = false;
    for (Eigen::Index w = 0; w < nc; ++w) {
      if (q(v, w) < 0) throw PreconditionError("amalgamate: negative rank");
      any = any || q(v, w) > 0;
    }
    if (!any) throw PreconditionError("amalgamate: q for " + b.ids[static_cast<std::size_t>(v)] + " is zero");
  }
  Amalgamation out;
  out.a.ids = c.ids;
  out.a.dims = c.dims;
  for (Eigen::Index w = 0; w < nc; ++w) {
    BigInt used = 0;
    for (Eigen::Index v = 0; v < nb; ++v) {
      used += q(v, w);
      out.a.dims[static_cast<std::size_t>(w)] += (b.dims[static_cast<std::size_t>(v)] - 1) * q(v, w);
    }
    if (used > c.dims[static_cast<std::size_t>(w)])
      throw PreconditionError("amalgamate: ranks into " + c.ids[static_cast<std::size_t>(w)] + " total " +
                              used.str() + " but the summand has dimension " +
                              c.dims[static_cast<std::size_t>(w)].str());
  }
  out.incl_b = q;
  out.incl_c = identity_matrix(nc);
  for (Eigen::Index w = 0; w < nc; ++w) {
    BigInt fit = c.dims[static_cast<std::size_t>(w)];
    for (Eigen::Index v = 0; v < nb; ++v) fit += q(v, w) * b.dims[static_cast<std::size_t>(v)] - q(v, w);
    if (fit != out.a.dims[static_cast<std::size_t>(w)]) throw Inconsistency("amalgamate: dimension law broken");
  }
  return out;
}

namespace {

struct Group {
  std::string vertex;
  int level = 0;
  std::vector<std::string> members;  // members[i-1] is the vertex with index i
};

bool subset(const RangeSet& small, const RangeSet& big) {
  if (small.cofinite || big.cofinite) return false;
  return std::includes(big.members.begin(), big.members.end(), small.members.begin(), small.members.end()) &&
         std::includes(big.tails.begin(), big.tails.end(), small.tails.begin(), small.tails.end());
}

}  // namespace

FinDimTower simulate_direct_limit(const Ultragraph& g, const OriginMap& origin, int depth) {
  if (depth < 1) throw PreconditionError("simulate: depth must be at least 1");
  if (!g.bijective_source()) throw PreconditionError("simulate: source map is not bijective");

  std::vector<Group> groups;
  std::map<std::pair<int, std::string>, std::size_t> group_of;
  int top = 0;
  for (const auto& x : g.vertices) {
    auto it = origin.find(x);
    if (it == origin.end()) throw PreconditionError("simulate: vertex " + x + " has no recorded origin");
    const VertexOrigin& o = it->second;
    auto key = std::make_pair(o.level, o.vertex);
    auto [pos, fresh] = group_of.emplace(key, groups.size());
    if (fresh) groups.push_back({o.vertex, o.level, {}});
    Group& gr = groups[pos->second];
    if (o.index < 1) throw PreconditionError("simulate: vertex " + x + " has index below 1");
    if (gr.members.size() < static_cast<std::size_t>(o.index)) gr.members.resize(static_cast<std::size_t>(o.index));
    if (!gr.members[static_cast<std::size_t>(o.index - 1)].empty())
      throw PreconditionError("simulate: two vertices share origin " + o.vertex + " index " +
                              std::to_string(o.index));
    gr.members[static_cast<std::size_t>(o.index - 1)] = x;
    top = std::max(top, o.level);
  }
  if (depth > top)
    throw UnknownAtDepth("simulate: ultragraph only covers " + std::to_string(top) + " levels", {});

  std::map<std::string, std::size_t> member_group;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& gr = groups[gi];
    for (std::size_t i = 0; i < gr.members.size(); ++i) {
      if (gr.members[i].empty())
        throw PreconditionError("simulate: " + gr.vertex + " is missing index " + std::to_string(i + 1));
      member_group[gr.members[i]] = gi;
      if (i == 0) continue;
      const RangeSet& r = g.edge_from(gr.members[i])->range;
      if (r.cofinite || !r.tails.empty() || r.members != std::set<std::string>{gr.members[i - 1]})
        throw PreconditionError("simulate: range of the edge at " + gr.members[i] + " is not {" +
                                gr.members[i - 1] + "}");
    }
  }

  std::vector<std::vector<std::size_t>> by_level(static_cast<std::size_t>(top) + 1);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) by_level[static_cast<std::size_t>(groups[gi].level)].push_back(gi);
  auto shape_of = [&](int n) {
    FinDimShape s;
    for (std::size_t gi : by_level[static_cast<std::size_t>(n)]) {
      s.ids.push_back(groups[gi].vertex);
      s.dims.push_back(BigInt(groups[gi].members.size() + 1));
    }
    return s;
  };

  FinDimTower tower;
  tower.shapes.push_back(shape_of(1));
  if (tower.shapes[0].size() == 0) throw PreconditionError("simulate: no vertices on level 1");
  for (int n = 1; n < depth; ++n) {
    const auto& lower = by_level[static_cast<std::size_t>(n)];
    const auto& upper = by_level[static_cast<std::size_t>(n + 1)];
    MultMatrix q = zero_matrix(static_cast<Eigen::Index>(lower.size()), static_cast<Eigen::Index>(upper.size()));
    std::map<std::size_t, Eigen::Index> col;
    for (std::size_t j = 0; j < upper.size(); ++j) col[upper[j]] = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < lower.size(); ++i) {
      const Group& gv = groups[lower[i]];
      const RangeSet& r = g.edge_from(gv.members[0])->range;
      if (r.cofinite) throw PreconditionError("simulate: range at " + gv.members[0] + " is cofinite");
      std::set<std::string> members_left = r.members;
      std::set<std::string> tails_left = r.tails;
      for (const auto& x : r.members) {
        auto it = member_group.find(x);
        if (it == member_group.end())
          throw PreconditionError("simulate: range at " + gv.members[0] + " names unknown vertex " + x);
        if (groups[it->second].level == n + 1) {
          q(static_cast<Eigen::Index>(i), col.at(it->second)) += 1;
          members_left.erase(x);
        } else if (groups[it->second].level <= n) {
          throw PreconditionError("simulate: range at " + gv.members[0] + " reaches back to " + x);
        }
      }
      for (std::size_t j = 0; j < upper.size(); ++j) {
        const RangeSet& rw = g.edge_from(groups[upper[j]].members[0])->range;
        if (rw.empty()) throw PreconditionError("simulate: empty range at " + groups[upper[j]].members[0]);
        if (!subset(rw, r)) continue;
        q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 1;
        for (const auto& x : rw.members) members_left.erase(x);
        for (const auto& t : rw.tails) tails_left.erase(t);
      }
      if (!members_left.empty())
        throw PreconditionError("simulate: range at " + gv.members[0] + " has unexplained vertex " +
                                *members_left.begin());
      if (!tails_left.empty())
        throw PreconditionError("simulate: range at " + gv.members[0] + " has unexplained tail " +
                                *tails_left.begin());
    }
    Amalgamation a = amalgamate(tower.shapes.back(), shape_of(n + 1), q);
    tower.shapes.push_back(a.a);
    tower.inclusions.push_back(q);
  }
  return tower;
}

FinDimTower simulate_direct_limit(const RealizedUltragraph& g, int depth) {
  return simulate_direct_limit(g.graph, g.origin, depth);
}

Diagram tower_to_diagram(const FinDimTower& t, const std::string& name) {
  Diagram d;
  d.name = name;
  for (const auto& s : t.shapes) {
    Level l;
    for (std::size_t i = 0; i < s.size(); ++i) l.vertices.push_back({s.ids[i], s.dims[i]});
    d.add_level(std::move(l));
  }
  for (std::size_t n = 0; n < t.inclusions.size(); ++n) d.set_matrix(static_cast<int>(n) + 1, t.inclusions[n]);
  return d;
}

bool VerificationReport::pass() const {
  for (const auto& l : levels)
    if (!l.pass) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return !levels.empty();
}

std::string VerificationReport::first_mismatch() const {
  for (const auto& c : checks)
    if (!c.pass) return c.detail;
  for (const auto& l : levels)
    if (!l.pass) return "level " + std::to_string(l.level) + ": " + l.detail;
  return "";
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) os << "check " << (c.pass ? "PASS " : "FAIL ") << c.detail << "\n";
  for (const auto& l : levels)
    os << "level " << l.level << " " << (l.pass ? "PASS" : "FAIL") << " " << l.detail << "\n";
  os << "result " << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

namespace {

std::string dims_text(const std::vector<std::string>& ids, const std::vector<BigInt>& dims) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < ids.size(); ++i) parts.push_back(ids[i] + "=" + dims[i].str());
  return "(" + join(parts, " ") + ")";
}

std::string matrix_text(const MultMatrix& m) {
  std::vector<std::string> rows;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> r;
    for (Eigen::Index j = 0; j < m.cols(); ++j) r.push_back(m(i, j).str());
    rows.push_back(join(r, ","));
  }
  return "[" + join(rows, ";") + "]";
}

}  // namespace

VerificationReport compare_tower(const Diagram& d, const FinDimTower& t, int depth) {
  VerificationReport rep;
  Diagram src = truncate(d, depth);
  for (int n = 1; n <= depth; ++n) {
    LevelCheck lc;
    lc.level = n;
    if (static_cast<std::size_t>(n) > t.shapes.size()) {
      lc.detail = "missing from simulated tower";
      rep.levels.push_back(lc);
      continue;
    }
    const FinDimShape& s = t.shapes[static_cast<std::size_t>(n - 1)];
    std::map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < s.size(); ++i) pos[s.ids[i]] = i;
    std::vector<BigInt> want = std::vector<BigInt>();
    bool ok = s.size() == src.level(n).size();
    std::vector<BigInt> got_aligned;
    for (const auto& v : src.level(n).vertices) {
      want.push_back(v.dim);
      auto it = pos.find(v.id);
      if (it == pos.end()) {
        ok = false;
        got_aligned.push_back(0);
      } else {
        got_aligned.push_back(s.dims[it->second]);
        ok = ok && s.dims[it->second] == v.dim;
      }
    }
    std::string detail = "dims expected " + dims_text(src.ids(n), want) + " actual " + dims_text(s.ids, s.dims);
    if (ok && n > 1) {
      const FinDimShape& below = t.shapes[static_cast<std::size_t>(n - 2)];
      std::map<std::string, std::size_t> bpos;
      for (std::size_t i = 0; i < below.size(); ++i) bpos[below.ids[i]] = i;
      const MultMatrix& got = t.inclusions[static_cast<std::size_t>(n - 2)];
      MultMatrix aligned = zero_matrix(src.matrix(n - 1).rows(), src.matrix(n - 1).cols());
      auto lower_ids = src.ids(n - 1);
      auto upper_ids = src.ids(n);
      for (std::size_t i = 0; i < lower_ids.size(); ++i)
        for (std::size_t j = 0; j < upper_ids.size(); ++j)
          aligned(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              got(static_cast<Eigen::Index>(bpos.at(lower_ids[i])), static_cast<Eigen::Index>(pos.at(upper_ids[j])));
      ok = equal(aligned, src.matrix(n - 1));
      detail += " matrix expected " + matrix_text(src.matrix(n - 1)) + " actual " + matrix_text(aligned);
    }
    lc.pass = ok;
    lc.detail = detail;
    rep.levels.push_back(lc);
  }
  return rep;
}

VerificationReport verify_roundtrip(const Diagram& d, int depth) {
  if (depth < 1) throw PreconditionError("verify: depth must be at least 1");
  RealizedUltragraph g = build_ultragraph(d, depth + 1);
  return compare_tower(d, simulate_direct_limit(g, depth), depth);
}

VerificationReport verify_roundtrip(const Diagram& d, int depth, const InjectionTable& k) {
  if (depth < 1) throw PreconditionError("verify: depth must be at least 1");
  RealizedUltragraph g = build_ultragraph(d, depth + 1, k);
  return compare_tower(d, simulate_direct_limit(g, depth), depth);
}

VerificationReport verify_row_finite(const Diagram& d, int depth) {
  if (depth < 1) throw PreconditionError("verify: depth must be at least 1");
  require_strict(truncate(d, depth + 1));
  RealizedUltragraph g = build_ultragraph(d, depth + 1);
  DirectedGraph e = expand_ultragraph_to_graph(g.graph);
  VerificationReport rep;
  auto check = [&](bool ok, const std::string& what) { rep.checks.push_back({0, ok, what}); };

  bool infinite = std::any_of(e.edges.begin(), e.edges.end(), [](const GraphEdge& x) { return x.infinite; });
  check(!infinite, "no infinite emitters");
  check(e.sinks().empty(), "no sinks");
  check(find_cycle(e).has_cycle == Tri::no, "no cycles");

  ZeroOneMatrix em = graph_to_edge_matrix(e);
  bool rows_ok = true;
  for (const auto& [i, row] : em.rows) rows_ok = rows_ok && !(row.cols.empty() && row.tails.empty());
  check(rows_ok && em.index.size() == e.edges.size(), "edge matrix has one nonzero row per edge");

  ZeroOneMatrix adj = graph_to_adjacency_matrix(e);
  DirectedGraph dual = matrix_to_dual_graph(adj);
  std::multiset<std::pair<std::string, std::string>> a, b;
  for (const auto& x : e.edges) a.insert({x.source, x.target});
  for (const auto& x : dual.edges) b.insert({x.source, x.target});
  check(dual.vertices == e.vertices && dual.frontier == e.frontier && a == b,
        "dual graph of the adjacency matrix is the expanded graph");

  Ultragraph back = matrix_to_ultragraph(adj);
  check(back == Ultragraph{g.graph.name, g.graph.vertices, g.graph.edges},
        "matrix ultragraph equals the realized ultragraph");
  try {
    VerificationReport levels = compare_tower(d, simulate_direct_limit(back, g.origin, depth), depth);
    rep.levels = levels.levels;
  } catch (const std::exception& ex) {
    check(false, std::string("simulation failed: ") + ex.what());
  }
  return rep;
}

bool NumericReport::pass(double tol) const {
  return max_deviation <= tol && unit_deviation <= tol && rank == expected_rank;
}

namespace {

using Cx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Cx>;
using DenseCx = Matrix<Cx>;

struct UnitIndex {
  int w;
  long k;
  long r;
};

long small(const BigInt& x) {
  if (x > 100000) throw LimitExceeded("dimension too large for numeric matrix units");
  return x.convert_to<long>();
}

}  // namespace

NumericReport numeric_matrix_units(const FinDimShape& b, const FinDimShape& c, const MultMatrix& q,
                                   NumericOptions opt) {
  Amalgamation am = amalgamate(b, c, q);
  const int nb = static_cast<int>(b.size());
  const int nc = static_cast<int>(c.size());
  BigInt total = am.a.total();
  if (total > static_cast<long>(opt.cap))
    throw LimitExceeded("ambient dimension " + total.str() + " exceeds cap " + std::to_string(opt.cap));

  std::vector<long> bd(static_cast<std::size_t>(nb)), cd(static_cast<std::size_t>(nc));
  for (int v = 0; v < nb; ++v) bd[static_cast<std::size_t>(v)] = small(b.dims[static_cast<std::size_t>(v)]);
  for (int w = 0; w < nc; ++w) cd[static_cast<std::size_t>(w)] = small(c.dims[static_cast<std::size_t>(w)]);

  // kappa[v][w] = consecutive block of {0..c_w-1}; owner[w][k] = v or -1
  std::vector<std::vector<long>> owner(static_cast<std::size_t>(nc));
  std::vector<std::vector<std::vector<long>>> kappa(static_cast<std::size_t>(nb),
                                                    std::vector<std::vector<long>>(static_cast<std::size_t>(nc)));
  for (int w = 0; w < nc; ++w) {
    owner[static_cast<std::size_t>(w)].assign(static_cast<std::size_t>(cd[static_cast<std::size_t>(w)]), -1);
    long next = 0;
    for (int v = 0; v < nb; ++v)
      for (long t = 0; t < small(q(v, w)); ++t) {
        kappa[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)].push_back(next);
        owner[static_cast<std::size_t>(w)][static_cast<std::size_t>(next)] = v;
        ++next;
      }
  }

  // position of (w, k, r) in the ambient space
  std::map<std::tuple<int, long, long>, long> pos;
  std::vector<std::vector<std::pair<long, long>>> index_set(static_cast<std::size_t>(nc));
  long n = 0;
  for (int w = 0; w < nc; ++w) {
    auto& iw = index_set[static_cast<std::size_t>(w)];
    for (long k = 0; k < cd[static_cast<std::size_t>(w)]; ++k) iw.push_back({k, 0});
    for (int v = 0; v < nb; ++v)
      for (long k : kappa[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)])
        for (long r = 1; r < bd[static_cast<std::size_t>(v)]; ++r) iw.push_back({k, r});
    if (BigInt(iw.size()) != am.a.dims[static_cast<std::size_t>(w)])
      throw Inconsistency("index set size differs from the dimension law");
    for (const auto& [k, r] : iw) pos[{w, k, r}] = n++;
  }

  auto unit = [&](long x, long y) {
    SpMat m(n, n);
    m.insert(x, y) = 1.0;
    return m;
  };
  auto gamma = [&](int w, long k, long l) { return unit(pos.at({w, k, 0}), pos.at({w, l, 0})); };
  auto beta = [&](int v, long r, long s) {
    SpMat m(n, n);
    for (int w = 0; w < nc; ++w)
      for (long k : kappa[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)])
        m.coeffRef(pos.at({w, k, r}), pos.at({w, k, s})) += 1.0;
    return m;
  };

  std::vector<SpMat> alpha;
  std::vector<UnitIndex> row_of, col_of;
  for (int w = 0; w < nc; ++w) {
    const auto& iw = index_set[static_cast<std::size_t>(w)];
    for (const auto& [k, r] : iw)
      for (const auto& [l, s] : iw) {
        SpMat a = gamma(w, k, l);
        if (r >= 1) a = SpMat(beta(static_cast<int>(owner[static_cast<std::size_t>(w)][static_cast<std::size_t>(k)]), r, 0) * a);
        if (s >= 1) a = SpMat(a * beta(static_cast<int>(owner[static_cast<std::size_t>(w)][static_cast<std::size_t>(l)]), 0, s));
        alpha.push_back(a);
        row_of.push_back({w, k, r});
        col_of.push_back({w, l, s});
      }
  }
  const long units = static_cast<long>(alpha.size());
  // alpha index of (w, (k,r), (l,s))
  std::map<std::tuple<int, long, long, long, long>, long> alpha_at;
  for (long x = 0; x < units; ++x)
    alpha_at[{row_of[x].w, row_of[x].k, row_of[x].r, col_of[x].k, col_of[x].r}] = x;

  NumericReport rep;
  rep.total_dim = n;
  rep.units = units;
  rep.expected_rank = 0;
  for (const auto& a : am.a.dims) rep.expected_rank += small(a) * small(a);

  DenseCx u = DenseCx::Identity(n, n);
  if (opt.seed) {
    std::mt19937_64 rng(*opt.seed);
    std::normal_distribution<double> g;
    DenseCx z(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) z(i, j) = Cx(g(rng), g(rng));
    u = Eigen::HouseholderQR<DenseCx>(z).householderQ();
  }

  auto deviation = [](const auto& m) {
    double worst = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) worst = std::max(worst, std::abs(Cx(m(i, j))));
    return worst;
  };

  if (!opt.seed) {
    // entries of each unit as (row, col, value)
    using Entry = std::tuple<Eigen::Index, Eigen::Index, Cx>;
    std::vector<std::vector<Entry>> entries(static_cast<std::size_t>(units));
    for (long x = 0; x < units; ++x)
      for (int o = 0; o < alpha[x].outerSize(); ++o)
        for (SpMat::InnerIterator it(alpha[x], o); it; ++it)
          if (it.value() != Cx(0)) entries[x].push_back({it.row(), it.col(), it.value()});
    std::map<std::pair<Eigen::Index, Eigen::Index>, Cx> prod;
    for (long x = 0; x < units; ++x)
      for (long y = 0; y < units; ++y) {
        prod.clear();
        for (const auto& [i, k, a] : entries[x])
          for (const auto& [k2, j, b] : entries[y])
            if (k == k2) prod[{i, j}] += a * b;
        bool match = row_of[y].w == col_of[x].w && col_of[x].k == row_of[y].k && col_of[x].r == row_of[y].r;
        if (match)
          for (const auto& [i, j, c] : entries[alpha_at.at({row_of[x].w, row_of[x].k, row_of[x].r, col_of[y].k, col_of[y].r})])
            prod[{i, j}] -= c;
        for (const auto& [ij, v] : prod) rep.max_deviation = std::max(rep.max_deviation, std::abs(v));
        ++rep.pairs;
      }
  } else {
    // all units side by side, so each left factor needs one product
    DenseCx side(n, n * units);
    for (long x = 0; x < units; ++x) side.middleCols(x * n, n) = u * DenseCx(alpha[x]) * u.adjoint();
    DenseCx prod(n, n * units);
    for (long x = 0; x < units; ++x) {
      prod.noalias() = side.middleCols(x * n, n) * side;
      for (long y = 0; y < units; ++y) {
        bool match = row_of[y].w == col_of[x].w && col_of[x].k == row_of[y].k && col_of[x].r == row_of[y].r;
        if (match)
          prod.middleCols(y * n, n) -=
              side.middleCols(alpha_at.at({row_of[x].w, row_of[x].k, row_of[x].r, col_of[y].k, col_of[y].r}) * n, n);
        ++rep.pairs;
      }
      rep.max_deviation = std::max(rep.max_deviation, std::sqrt(prod.cwiseAbs2().maxCoeff()));
    }
  }

  DenseCx span(n * n, units);
  for (long x = 0; x < units; ++x) {
    DenseCx a = u * DenseCx(alpha[x]) * u.adjoint();
    span.col(x) = Eigen::Map<Vector<Cx>>(a.data(), n * n);
  }
  Eigen::FullPivLU<DenseCx> lu(span);
  lu.setThreshold(1e-9);
  rep.rank = lu.rank();

  SpMat one_b(n, n), sum_q(n, n), one_c(n, n);
  for (int v = 0; v < nb; ++v) {
    for (long r = 0; r < bd[static_cast<std::size_t>(v)]; ++r) one_b += beta(v, r, r);
    sum_q += beta(v, 0, 0);
  }
  for (int w = 0; w < nc; ++w)
    for (long k = 0; k < cd[static_cast<std::size_t>(w)]; ++k) one_c += gamma(w, k, k);
  DenseCx unit_expr = u * DenseCx(SpMat(one_b - sum_q + one_c)) * u.adjoint();
  rep.unit_deviation = deviation(DenseCx(unit_expr - DenseCx::Identity(n, n)));
  return rep;
}

ChainResult find_mn_chain(const Ultragraph& g, int n) {
  if (n < 1) throw PreconditionError("find-chain: n must be at least 1");
  CycleResult cyc = find_cycle(g);
  if (cyc.has_cycle == Tri::yes) throw PreconditionError("find-chain: ultragraph has a cycle");
  std::map<std::string, std::vector<std::string>> succ;
  bool open = false;
  for (const auto& e : g.edges) {
    bool u = false;
    auto r = resolve_range(g, e.range, &u);
    open = open || u;
    auto& s = succ[e.source];
    s.insert(s.end(), r.begin(), r.end());
  }
  std::map<std::string, int> longest;
  std::function<int(const std::string&)> len = [&](const std::string& v) {
    auto it = longest.find(v);
    if (it != longest.end()) return it->second;
    int best = 1;
    for (const auto& w : succ[v]) best = std::max(best, 1 + len(w));
    longest[v] = best;
    return best;
  };
  ChainResult out;
  std::string start;
  int best = 0;
  for (const auto& v : g.vertices) {
    int l = len(v);
    if (l > best) {
      best = l;
      start = v;
    }
  }
  if (best >= n) {
    out.found = Tri::yes;
    std::string cur = start;
    out.chain.push_back(cur);
    while (static_cast<int>(out.chain.size()) < n) {
      int want = longest[cur] - 1;
      for (const auto& w : succ[cur])
        if (longest[w] == want) {
          cur = w;
          break;
        }
      out.chain.push_back(cur);
    }
    return out;
  }
  out.found = open ? Tri::unknown : Tri::no;
  return out;
}

}  // namespace bratteli
