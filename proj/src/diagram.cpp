#include "bratteli/diagram.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bratteli {

const char* to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    default: return "unknown";
  }
}

Tri tri_from_string(const std::string& s) {
  if (s == "yes") return Tri::yes;
  if (s == "no") return Tri::no;
  if (s == "unknown") return Tri::unknown;
  throw std::invalid_argument("expected yes, no or unknown, got '" + s + "'");
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

DimVector Diagram::dims(int n) const {
  const Level& l = level(n);
  DimVector v(static_cast<Eigen::Index>(l.size()));
  for (std::size_t i = 0; i < l.size(); ++i) v(static_cast<Eigen::Index>(i)) = l.vertices[i].dim;
  return v;
}

std::vector<std::string> Diagram::ids(int n) const {
  std::vector<std::string> out;
  for (const auto& v : level(n).vertices) out.push_back(v.id);
  return out;
}

void Diagram::add_level(Level lvl) { levels.push_back(std::move(lvl)); }

void Diagram::set_matrix(int n, MultMatrix m) {
  if (static_cast<int>(edges.size()) < n) edges.resize(static_cast<std::size_t>(n));
  edges[static_cast<std::size_t>(n - 1)] = std::move(m);
}

bool operator==(const Diagram& a, const Diagram& b) {
  if (a.levels.size() != b.levels.size() || a.edges.size() != b.edges.size()) return false;
  for (std::size_t n = 0; n < a.levels.size(); ++n) {
    const auto& x = a.levels[n].vertices;
    const auto& y = b.levels[n].vertices;
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i].id != y[i].id || x[i].dim != y[i].dim) return false;
  }
  for (std::size_t n = 0; n < a.edges.size(); ++n)
    if (!equal(a.edges[n], b.edges[n])) return false;
  if (a.tail.has_value() != b.tail.has_value()) return false;
  if (a.tail && (a.tail->from != b.tail->from || a.tail->period != b.tail->period)) return false;
  return true;
}

PeriodicTail make_tail(const Diagram& d, int from, int period) {
  if (period < 1 || from < 1 || from + period > d.depth())
    throw PreconditionError("periodic tail must lie inside the stored levels");
  PeriodicTail t{from, period, {}};
  for (int ph = 0; ph < period; ++ph) {
    std::vector<std::string> ids;
    for (const auto& v : d.level(from + ph).vertices) ids.push_back(v.id.substr(0, v.id.rfind('@')));
    t.base_ids.push_back(ids);
  }
  return t;
}

namespace {

std::string vid(const Diagram& d, int n, Eigen::Index i) {
  return d.level(n).vertices.at(static_cast<std::size_t>(i)).id;
}

BigInt column_total(const MultMatrix& m, Eigen::Index j) {
  BigInt s = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += m(i, j);
  return s;
}

bool row_nonzero(const MultMatrix& m, Eigen::Index i) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (m(i, j) != 0) return true;
  return false;
}

}  // namespace

ValidationReport validate_diagram(const Diagram& d) {
  ValidationReport r;
  auto issue = [&](int lvl, const std::string& v, const std::string& msg) {
    r.issues.push_back({lvl, v, msg});
  };
  if (d.levels.empty()) {
    issue(0, "", "diagram has no levels");
    return r;
  }
  std::set<std::string> seen;
  for (int n = 1; n <= d.depth(); ++n) {
    const Level& l = d.level(n);
    if (l.vertices.empty()) issue(n, "", "level is empty");
    for (const auto& v : l.vertices) {
      if (!seen.insert(v.id).second) issue(n, v.id, "duplicate vertex id");
      if (v.dim < 1) issue(n, v.id, "dimension must be at least 1");
    }
  }
  if (static_cast<int>(d.edges.size()) != d.depth() - 1) {
    issue(0, "", "expected " + std::to_string(d.depth() - 1) + " edge matrices, found " +
                     std::to_string(d.edges.size()));
    return r;
  }
  bool shapes_ok = true;
  for (int n = 1; n < d.depth(); ++n) {
    const MultMatrix& m = d.matrix(n);
    if (m.rows() != static_cast<Eigen::Index>(d.level(n).size()) ||
        m.cols() != static_cast<Eigen::Index>(d.level(n + 1).size())) {
      issue(n, "", "edge matrix shape does not match levels " + std::to_string(n) + " and " +
                       std::to_string(n + 1));
      shapes_ok = false;
      continue;
    }
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) < 0) issue(n, vid(d, n, i), "negative multiplicity");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!row_nonzero(m, i)) issue(n, vid(d, n, i), "vertex has no outgoing edge (sink)");
  }
  if (!shapes_ok) return r;
  for (int n = 2; n <= d.depth(); ++n) {
    DimVector in = incoming_sum(d.matrix(n - 1), d.dims(n - 1));
    const Level& l = d.level(n);
    for (std::size_t j = 0; j < l.size(); ++j)
      if (l.vertices[j].dim < in(static_cast<Eigen::Index>(j)))
        issue(n, l.vertices[j].id,
              "dimension " + l.vertices[j].dim.str() + " is below incoming total " +
                  in(static_cast<Eigen::Index>(j)).str());
  }
  if (d.tail) {
    const PeriodicTail& t = *d.tail;
    if (t.period < 1 || t.from < 1 || t.from + t.period != d.depth()) {
      issue(0, "", "periodic tail must end at the last stored level");
      return r;
    }
    if (d.level(t.from).size() != d.level(d.depth()).size())
      issue(d.depth(), "", "last level does not match the width of level " +
                               std::to_string(t.from));
    else if (r.issues.empty()) {
      for (int phase = 0; phase < t.period; ++phase) {
        const MultMatrix& m = d.matrix(t.from + phase);
        DimVector s = surplus(d, t.from + phase);
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (s(j) == 0 && column_total(m, j) == 0)
            issue(t.from + phase + 1, vid(d, t.from + phase + 1, j),
                  "periodic continuation would give this vertex dimension 0");
      }
    }
    r.notes.push_back("periodic tail from level " + std::to_string(t.from) + " with period " +
                      std::to_string(t.period));
  } else {
    r.notes.push_back("truncation boundary at level " + std::to_string(d.depth()));
  }
  return r;
}

void require_valid(const Diagram& d) {
  ValidationReport r = validate_diagram(d);
  if (!r.valid()) {
    const Issue& i = r.issues.front();
    throw PreconditionError("invalid diagram at level " + std::to_string(i.level) +
                            (i.vertex.empty() ? "" : " vertex " + i.vertex) + ": " + i.message);
  }
}

DimVector surplus(const Diagram& d, int n) {
  DimVector in = incoming_sum(d.matrix(n), d.dims(n));
  return d.dims(n + 1) - in;
}

Diagram extend(const Diagram& d, int depth) {
  if (!d.tail || depth <= d.depth()) return d;
  const PeriodicTail& t = *d.tail;
  std::vector<MultMatrix> mats;
  std::vector<DimVector> surp;
  for (int ph = 0; ph < t.period; ++ph) {
    mats.push_back(d.matrix(t.from + ph));
    surp.push_back(surplus(d, t.from + ph));
  }
  Diagram out = d;
  while (out.depth() < depth) {
    int last = out.depth();
    int ph = (last - t.from) % t.period;
    int next_ph = (last + 1 - t.from) % t.period;
    DimVector nd = incoming_sum(mats[static_cast<std::size_t>(ph)], out.dims(last)) +
                   surp[static_cast<std::size_t>(ph)];
    Level lvl;
    const auto& base = t.base_ids.at(static_cast<std::size_t>(next_ph));
    for (Eigen::Index i = 0; i < nd.size(); ++i)
      lvl.vertices.push_back({base.at(static_cast<std::size_t>(i)) + "@" + std::to_string(last + 1), nd(i)});
    out.add_level(std::move(lvl));
    out.set_matrix(last, mats[static_cast<std::size_t>(ph)]);
  }
  int from = out.depth() - t.period;
  int rot = (from - t.from) % t.period;
  std::vector<std::vector<std::string>> base(t.base_ids.size());
  for (int ph = 0; ph < t.period; ++ph)
    base[static_cast<std::size_t>(ph)] = t.base_ids[static_cast<std::size_t>((ph + rot) % t.period)];
  out.tail->from = from;
  out.tail->base_ids = base;
  return out;
}

Diagram truncate(const Diagram& d, int depth) {
  Diagram src = depth > d.depth() ? extend(d, depth) : d;
  if (depth > src.depth()) throw PreconditionError("level " + std::to_string(depth) +
                                                   " is beyond the represented depth");
  Diagram out;
  out.name = d.name;
  for (int n = 1; n <= depth; ++n) out.add_level(src.level(n));
  for (int n = 1; n < depth; ++n) out.set_matrix(n, src.matrix(n));
  return out;
}

MultMatrix path_matrix(const Diagram& d, int a, int b) {
  if (a > b) throw std::invalid_argument("path_matrix: a > b");
  MultMatrix p = identity_matrix(static_cast<Eigen::Index>(d.level(a).size()));
  for (int n = a; n < b; ++n) p = product(p, d.matrix(n));
  return p;
}

Diagram telescope(const Diagram& d, const std::vector<int>& keep) {
  if (keep.empty()) throw PreconditionError("telescope: keep list is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 1) throw PreconditionError("telescope: level numbers start at 1");
    if (i && keep[i] <= keep[i - 1])
      throw PreconditionError("telescope: keep must be strictly increasing");
  }
  Diagram src = d;
  if (keep.back() > d.depth()) {
    if (!d.tail)
      throw PreconditionError("telescope: level " + std::to_string(keep.back()) +
                              " is beyond the represented depth " + std::to_string(d.depth()));
    src = extend(d, keep.back());
  }
  Diagram out;
  out.name = d.name;
  for (int k : keep) out.add_level(src.level(k));
  for (std::size_t i = 0; i + 1 < keep.size(); ++i)
    out.set_matrix(static_cast<int>(i) + 1, path_matrix(src, keep[i], keep[i + 1]));
  return out;
}

std::size_t HereditarySet::count() const {
  std::size_t c = 0;
  for (const auto& l : member) c += static_cast<std::size_t>(std::count(l.begin(), l.end(), true));
  return c;
}

std::vector<std::string> HereditarySet::vertex_ids(const Diagram& d) const {
  std::vector<std::string> out;
  Diagram full = extend(d, static_cast<int>(member.size()));
  if (member.size() > full.levels.size()) throw PreconditionError("hereditary set is deeper than the diagram");
  for (std::size_t n = 0; n < member.size(); ++n)
    for (std::size_t i = 0; i < member[n].size(); ++i)
      if (member[n][i]) out.push_back(full.levels[n].vertices.at(i).id);
  return out;
}

namespace {

void check_shape(const Diagram& d, const HereditarySet& h) {
  if (h.member.size() > d.levels.size())
    throw PreconditionError("hereditary set is deeper than the diagram");
  for (std::size_t n = 0; n < h.member.size(); ++n)
    if (h.member[n].size() != d.levels[n].size())
      throw PreconditionError("hereditary set does not match level " + std::to_string(n + 1));
}

}  // namespace

bool is_hereditary(const Diagram& d0, const HereditarySet& h) {
  const Diagram d = h.member.empty() ? d0 : truncate(d0, static_cast<int>(h.member.size()));
  check_shape(d, h);
  for (std::size_t n = 0; n + 1 < h.member.size(); ++n) {
    const MultMatrix& m = d.edges[n];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!h.member[n][static_cast<std::size_t>(i)]) continue;
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0 && !h.member[n + 1][static_cast<std::size_t>(j)]) return false;
    }
  }
  return true;
}

bool is_saturated(const Diagram& d0, const HereditarySet& h) {
  const Diagram d = h.member.empty() ? d0 : truncate(d0, static_cast<int>(h.member.size()));
  check_shape(d, h);
  for (std::size_t n = 0; n + 1 < h.member.size(); ++n) {
    const MultMatrix& m = d.edges[n];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (h.member[n][static_cast<std::size_t>(i)]) continue;
      bool escapes = false;
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0 && !h.member[n + 1][static_cast<std::size_t>(j)]) escapes = true;
      if (!escapes) return false;
    }
  }
  return true;
}

Diagram quotient_diagram(const Diagram& d, const HereditarySet& h) {
  if (!is_hereditary(d, h)) throw PreconditionError("set is not hereditary");
  if (!is_saturated(d, h)) throw PreconditionError("set is not saturated");
  int depth = static_cast<int>(h.member.size());
  Diagram src = truncate(d, depth);
  std::vector<std::vector<Eigen::Index>> keep(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n)
    for (std::size_t i = 0; i < h.member[static_cast<std::size_t>(n)].size(); ++i)
      if (!h.member[static_cast<std::size_t>(n)][i]) keep[static_cast<std::size_t>(n)].push_back(static_cast<Eigen::Index>(i));

  Diagram out;
  out.name = d.name;
  int prev = -1;
  MultMatrix acc;
  for (int n = 0; n < depth; ++n) {
    const auto& k = keep[static_cast<std::size_t>(n)];
    if (prev >= 0 && n > 0) {
      const MultMatrix& m = src.edges[static_cast<std::size_t>(n - 1)];
      const auto& kp = keep[static_cast<std::size_t>(n - 1)];
      MultMatrix r = zero_matrix(static_cast<Eigen::Index>(kp.size()), static_cast<Eigen::Index>(k.size()));
      for (std::size_t a = 0; a < kp.size(); ++a)
        for (std::size_t b = 0; b < k.size(); ++b)
          r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(kp[a], k[b]);
      acc = (n - 1 == prev) ? r : product(acc, r);
    }
    if (k.empty()) continue;
    Level lvl;
    for (auto i : k) lvl.vertices.push_back(src.levels[static_cast<std::size_t>(n)].vertices[static_cast<std::size_t>(i)]);
    out.add_level(std::move(lvl));
    if (prev >= 0) out.set_matrix(out.depth() - 1, acc);
    prev = n;
  }
  return out;
}

HereditarySet complement_of_ancestors(const Diagram& d, int depth,
                                      const std::vector<int>& keep_last) {
  Diagram src = truncate(d, depth);
  std::vector<std::vector<bool>> q(static_cast<std::size_t>(depth));
  for (int n = 0; n < depth; ++n) q[static_cast<std::size_t>(n)].assign(src.levels[static_cast<std::size_t>(n)].size(), false);
  for (int j : keep_last) q.back().at(static_cast<std::size_t>(j)) = true;
  for (int n = depth - 2; n >= 0; --n) {
    const MultMatrix& m = src.edges[static_cast<std::size_t>(n)];
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0 && q[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(j)])
          q[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = true;
  }
  HereditarySet h;
  for (auto& l : q) {
    std::vector<bool> c(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) c[i] = !l[i];
    h.member.push_back(std::move(c));
  }
  return h;
}

std::vector<HereditaryEntry> enumerate_hereditary_sets(const Diagram& d, int depth,
                                                       std::size_t limit) {
  int l = d.tail ? depth : std::min(depth, d.depth());
  if (l < 1) throw PreconditionError("depth must be at least 1");
  Diagram src = truncate(d, l);
  std::size_t width = src.level(l).size();
  if (width >= 63 || (std::size_t{1} << width) > limit)
    throw LimitExceeded("enumeration needs 2^" + std::to_string(width) +
                        " candidates, above the limit " + std::to_string(limit) +
                        "; use periodic-tail analysis or raise the limit");
  std::vector<HereditaryEntry> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << width); ++mask) {
    HereditarySet h;
    h.member.resize(static_cast<std::size_t>(l));
    for (int n = 0; n < l; ++n) h.member[static_cast<std::size_t>(n)].assign(src.levels[static_cast<std::size_t>(n)].size(), false);
    for (std::size_t i = 0; i < width; ++i) h.member.back()[i] = (mask >> i) & 1u;
    for (int n = l - 2; n >= 0; --n) {
      const MultMatrix& m = src.edges[static_cast<std::size_t>(n)];
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        bool all = true;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
          if (m(i, j) != 0 && !h.member[static_cast<std::size_t>(n + 1)][static_cast<std::size_t>(j)]) all = false;
        h.member[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = all;
      }
    }
    Diagram q = quotient_diagram(src, h);
    out.push_back({std::move(h), std::move(q)});
  }
  return out;
}

bool strict_at(const Diagram& d, int n, int i) {
  if (n <= 1) return true;
  DimVector in = incoming_sum(d.matrix(n - 1), d.dims(n - 1));
  return d.level(n).vertices.at(static_cast<std::size_t>(i)).dim > in(i);
}

bool findim_condition_at(const Diagram& d, int n, int i) {
  if (strict_at(d, n, i)) return true;
  const MultMatrix& m = d.matrix(n - 1);
  for (Eigen::Index u = 0; u < m.rows(); ++u)
    if (m(u, i) >= 2) return true;
  return false;
}

namespace {

/// Chain of `window` transitions ending at level L vertex j, each step a
/// single multiplicity-one incoming edge with unchanged dimension.
std::optional<std::vector<Eigen::Index>> preserving_chain(const Diagram& d, Eigen::Index j, int window) {
  int last = d.depth();
  std::vector<Eigen::Index> chain{j};
  Eigen::Index cur = j;
  for (int n = last; n > last - window; --n) {
    const MultMatrix& m = d.matrix(n - 1);
    if (column_total(m, cur) != 1) return std::nullopt;
    Eigen::Index pred = -1;
    for (Eigen::Index u = 0; u < m.rows(); ++u)
      if (m(u, cur) == 1) pred = u;
    if (d.level(n - 1).vertices[static_cast<std::size_t>(pred)].dim !=
        d.level(n).vertices[static_cast<std::size_t>(cur)].dim)
      return std::nullopt;
    cur = pred;
    chain.push_back(cur);
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

std::optional<Certificate> chain_certificate(const Diagram& d, int window, bool need_one) {
  int last = d.depth();
  if (last < 2 || window < 1 || window > last - 1) return std::nullopt;
  for (std::size_t j = 0; j < d.level(last).size(); ++j) {
    if (need_one && d.level(last).vertices[j].dim != 1) continue;
    auto chain = preserving_chain(d, static_cast<Eigen::Index>(j), window);
    if (!chain) continue;
    Certificate c;
    c.depth = last;
    c.set = complement_of_ancestors(d, last, {static_cast<int>(j)});
    int n = last - window;
    for (auto i : *chain) c.chain.push_back(d.level(n++).vertices[static_cast<std::size_t>(i)].id);
    c.note = "dimension " + d.level(last).vertices[j].dim.str() + " is carried unchanged along " +
             join(c.chain, " -> ");
    return c;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Certificate> exhibits_C(const Diagram& d, int window) {
  return chain_certificate(d, window, true);
}

std::optional<Certificate> exhibits_findim(const Diagram& d, int window) {
  return chain_certificate(d, window, false);
}

std::optional<Certificate> exhibits_unital(const Diagram& d, int window) {
  int last = d.depth();
  if (last < 2 || window < 1) return std::nullopt;
  int lower = std::max(2, last - window + 1);
  std::vector<std::vector<bool>> tight(static_cast<std::size_t>(last + 1));
  for (int n = lower; n <= last; ++n) {
    DimVector s = surplus(d, n - 1);
    for (Eigen::Index i = 0; i < s.size(); ++i) tight[static_cast<std::size_t>(n)].push_back(s(i) == 0);
  }
  std::vector<int> good;
  for (std::size_t j = 0; j < d.level(last).size(); ++j) {
    // ancestors of j inside the window
    std::vector<bool> cur(d.level(last).size(), false);
    cur[j] = true;
    bool ok = true;
    for (int n = last; n >= lower && ok; --n) {
      for (std::size_t i = 0; i < cur.size(); ++i)
        if (cur[i] && !tight[static_cast<std::size_t>(n)][i]) ok = false;
      if (n == lower) break;
      const MultMatrix& m = d.matrix(n - 1);
      std::vector<bool> prev(static_cast<std::size_t>(m.rows()), false);
      for (Eigen::Index u = 0; u < m.rows(); ++u)
        for (Eigen::Index v = 0; v < m.cols(); ++v)
          if (m(u, v) != 0 && cur[static_cast<std::size_t>(v)]) prev[static_cast<std::size_t>(u)] = true;
      cur = std::move(prev);
    }
    if (ok) good.push_back(static_cast<int>(j));
  }
  if (good.empty()) return std::nullopt;
  Certificate c;
  c.depth = last;
  c.set = complement_of_ancestors(d, last, good);
  for (int j : good) c.chain.push_back(d.level(last).vertices[static_cast<std::size_t>(j)].id);
  c.note = "every inclusion into " + join(c.chain, ", ") + " and their ancestors over the last " +
           std::to_string(last - lower + 1) + " level(s) is unital";
  return c;
}

TailAnalysis analyze_tail(const Diagram& d) {
  if (!d.tail) throw PreconditionError("diagram has no periodic tail");
  require_valid(d);
  const PeriodicTail& t = *d.tail;
  const int p = t.period;
  std::vector<int> offset(static_cast<std::size_t>(p + 1), 0);
  for (int ph = 0; ph < p; ++ph)
    offset[static_cast<std::size_t>(ph + 1)] = offset[static_cast<std::size_t>(ph)] + static_cast<int>(d.level(t.from + ph).size());
  const int k = offset[static_cast<std::size_t>(p)];
  auto node = [&](int ph, Eigen::Index i) { return offset[static_cast<std::size_t>(ph % p)] + static_cast<int>(i); };

  std::vector<std::vector<int>> succ(static_cast<std::size_t>(k)), pred(static_cast<std::size_t>(k));
  std::vector<int> keep_pred(static_cast<std::size_t>(k), -1);
  std::vector<bool> tight(static_cast<std::size_t>(k), false);
  for (int ph = 0; ph < p; ++ph) {
    const MultMatrix& m = d.matrix(t.from + ph);
    DimVector s = surplus(d, t.from + ph);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      int b = node(ph + 1, j);
      tight[static_cast<std::size_t>(b)] = s(j) == 0;
      if (s(j) == 0 && column_total(m, j) == 1)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          if (m(i, j) == 1) keep_pred[static_cast<std::size_t>(b)] = node(ph, i);
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (m(i, j) != 0) {
          succ[static_cast<std::size_t>(node(ph, i))].push_back(b);
          pred[static_cast<std::size_t>(b)].push_back(node(ph, i));
        }
    }
  }

  TailAnalysis out;
  out.period_nodes = k;

  // dimension-preserving edges form a reverse-functional graph; find its cycles
  std::vector<bool> on_cycle(static_cast<std::size_t>(k), false);
  for (int start = 0; start < k; ++start) {
    int cur = start;
    for (int steps = 0; steps <= k && cur >= 0; ++steps) {
      cur = keep_pred[static_cast<std::size_t>(cur)];
      if (cur == start) {
        on_cycle[static_cast<std::size_t>(start)] = true;
        break;
      }
    }
  }
  out.has_findim = std::find(on_cycle.begin(), on_cycle.end(), true) != on_cycle.end();

  if (out.has_findim) {
    Diagram u = extend(d, t.from + p * (k + 2));
    for (int lvl = t.from; lvl <= u.depth(); ++lvl) {
      int ph = (lvl - t.from) % p;
      const Level& l = u.level(lvl);
      for (std::size_t i = 0; i < l.size(); ++i)
        if (on_cycle[static_cast<std::size_t>(node(ph, static_cast<Eigen::Index>(i)))] && l.vertices[i].dim == 1) out.has_C = true;
    }
  }

  std::vector<bool> r = tight;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < k; ++x) {
      if (!r[static_cast<std::size_t>(x)]) continue;
      bool ok = !succ[static_cast<std::size_t>(x)].empty();
      bool has_succ = false;
      for (int y : succ[static_cast<std::size_t>(x)]) has_succ = has_succ || r[static_cast<std::size_t>(y)];
      for (int y : pred[static_cast<std::size_t>(x)]) ok = ok && r[static_cast<std::size_t>(y)];
      if (!ok || !has_succ) {
        r[static_cast<std::size_t>(x)] = false;
        changed = true;
      }
    }
  }
  out.has_unital = std::find(r.begin(), r.end(), true) != r.end();
  return out;
}

std::vector<int> greedy_telescoping(const Diagram& d, GapRule rule,
                                    std::vector<std::string>* stuck) {
  std::vector<int> kept{1};
  int cur = 1;
  const int last = d.depth();
  while (cur < last) {
    MultMatrix p = identity_matrix(static_cast<Eigen::Index>(d.level(cur).size()));
    DimVector dc = d.dims(cur);
    int found = -1;
    std::vector<std::string> bad;
    for (int m = cur + 1; m <= last && found < 0; ++m) {
      p = product(p, d.matrix(m - 1));
      DimVector in = incoming_sum(p, dc);
      bad.clear();
      for (Eigen::Index w = 0; w < p.cols(); ++w) {
        bool ok = d.level(m).vertices[static_cast<std::size_t>(w)].dim > in(w);
        if (!ok && rule == GapRule::findim)
          for (Eigen::Index u = 0; u < p.rows(); ++u)
            if (p(u, w) >= 2) ok = true;
        if (!ok) bad.push_back(d.level(m).vertices[static_cast<std::size_t>(w)].id);
      }
      if (bad.empty()) found = m;
    }
    if (found < 0) {
      if (stuck) *stuck = bad;
      break;
    }
    kept.push_back(found);
    cur = found;
  }
  return kept;
}

QuotientProperties check_quotient_properties(const Diagram& d, int depth, QuotientOptions opt) {
  QuotientProperties q;
  if (d.tail) {
    TailAnalysis a = analyze_tail(d);
    int k = a.period_nodes;
    int window = 2 * k + 1;
    Diagram u = truncate(d, std::max(depth, d.depth() + window + d.tail->period + 1));
    auto fill = [&](TriResult& r, bool yes, std::optional<Certificate> c, const char* what) {
      r.value = yes ? Tri::yes : Tri::no;
      if (yes) r.certificate = std::move(c);
      r.reason = std::string(yes ? "periodic tail carries " : "periodic tail rules out ") + what;
    };
    fill(q.has_C, a.has_C, a.has_C ? exhibits_C(u, window) : std::nullopt, "a one-dimensional quotient");
    fill(q.has_findim, a.has_findim, a.has_findim ? exhibits_findim(u, window) : std::nullopt,
         "a finite-dimensional quotient");
    fill(q.has_unital, a.has_unital, a.has_unital ? exhibits_unital(u, window) : std::nullopt,
         "a unital quotient");
    return q;
  }

  Diagram t = truncate(d, std::min(depth, d.depth()));
  require_valid(t);
  const int last = t.depth();

  if (auto c = exhibits_unital(t, opt.window)) {
    q.has_unital = {Tri::yes, c, c->note};
  } else if (last >= 2 && greedy_telescoping(t, GapRule::strict).back() == last) {
    q.has_unital = {Tri::no, std::nullopt, "a telescoping is strictly growing at every level"};
  } else {
    q.has_unital.reason = "no certificate and no strictly growing telescoping within depth";
  }

  if (auto c = exhibits_findim(t, opt.window)) {
    q.has_findim = {Tri::yes, c, c->note};
  } else if (last >= 2 && greedy_telescoping(t, GapRule::findim).back() == last) {
    q.has_findim = {Tri::no, std::nullopt, "a telescoping forces dimension growth along every path"};
  } else if (q.has_unital.value == Tri::no) {
    q.has_findim = {Tri::no, std::nullopt, "no unital quotient"};
  } else {
    q.has_findim.reason = "no certificate and no growth-forcing telescoping within depth";
  }

  bool one_at_end = false;
  for (const auto& v : t.level(last).vertices) one_at_end = one_at_end || v.dim == 1;
  if (auto c = exhibits_C(t, opt.window)) {
    q.has_C = {Tri::yes, c, c->note};
  } else if (q.has_findim.value == Tri::no) {
    q.has_C = {Tri::no, std::nullopt, "no finite-dimensional quotient"};
  } else if (!one_at_end && last >= 2) {
    q.has_C = {Tri::no, std::nullopt, "no vertex of dimension 1 at the last level"};
  } else {
    q.has_C.reason = "dimension-1 vertices remain at the last level";
  }
  return q;
}

namespace {

/// Drops the listed vertices; levels left empty are removed and the
/// surrounding matrices composed.
Diagram remove_vertices(const Diagram& d, const std::vector<std::vector<bool>>& drop) {
  HereditarySet h;
  Diagram out;
  out.name = d.name;
  std::vector<std::vector<Eigen::Index>> keep(d.levels.size());
  for (std::size_t n = 0; n < d.levels.size(); ++n)
    for (std::size_t i = 0; i < d.levels[n].size(); ++i)
      if (!drop[n][i]) keep[n].push_back(static_cast<Eigen::Index>(i));
  int prev = -1;
  MultMatrix acc;
  for (std::size_t n = 0; n < d.levels.size(); ++n) {
    if (prev >= 0) {
      const MultMatrix& m = d.edges[n - 1];
      const auto& kp = keep[n - 1];
      const auto& k = keep[n];
      MultMatrix r = zero_matrix(static_cast<Eigen::Index>(kp.size()), static_cast<Eigen::Index>(k.size()));
      for (std::size_t a = 0; a < kp.size(); ++a)
        for (std::size_t b = 0; b < k.size(); ++b)
          r(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = m(kp[a], k[b]);
      acc = (static_cast<int>(n) - 1 == prev) ? r : product(acc, r);
    }
    if (keep[n].empty()) continue;
    Level lvl;
    for (auto i : keep[n]) lvl.vertices.push_back(d.levels[n].vertices[static_cast<std::size_t>(i)]);
    out.add_level(std::move(lvl));
    if (prev >= 0) out.set_matrix(out.depth() - 1, acc);
    prev = static_cast<int>(n);
  }
  return out;
}

Diagram trim_unchecked(const Diagram& d) {
  if (!d.tail) {
    std::vector<std::vector<bool>> drop(d.levels.size());
    for (std::size_t n = 0; n < d.levels.size(); ++n)
      for (const auto& v : d.levels[n].vertices) drop[n].push_back(v.dim == 1);
    Diagram out = remove_vertices(d, drop);
    if (out.levels.empty()) throw Inconsistency("trim removed every vertex");
    ValidationReport r = validate_diagram(out);
    if (!r.valid())
      throw Inconsistency("trimmed diagram is invalid at level " + std::to_string(r.issues[0].level) +
                          ": " + r.issues[0].message);
    return out;
  }
  const PeriodicTail& t = *d.tail;
  int k = 0;
  for (int ph = 0; ph < t.period; ++ph) k += static_cast<int>(d.level(t.from + ph).size());
  Diagram u = extend(d, d.depth() + (k + 1) * t.period);
  const PeriodicTail& ut = *u.tail;
  std::vector<std::vector<bool>> drop(u.levels.size());
  for (std::size_t n = 0; n < u.levels.size(); ++n)
    for (const auto& v : u.levels[n].vertices) drop[n].push_back(v.dim == 1);
  if (drop[static_cast<std::size_t>(ut.from - 1)] != drop[static_cast<std::size_t>(u.depth() - 1)])
    throw Inconsistency("dimension-1 pattern of the tail did not settle");
  std::vector<std::vector<std::string>> base = ut.base_ids;
  for (int ph = 0; ph < t.period; ++ph) {
    std::vector<std::string> kept;
    const auto& dr = drop[static_cast<std::size_t>(ut.from - 1 + ph)];
    for (std::size_t i = 0; i < dr.size(); ++i)
      if (!dr[i]) kept.push_back(base[static_cast<std::size_t>(ph)][i]);
    if (kept.empty()) throw Inconsistency("trim would empty a periodic level");
    base[static_cast<std::size_t>(ph)] = kept;
  }
  Diagram plain = u;
  plain.tail.reset();
  Diagram out = remove_vertices(plain, drop);
  int removed_levels = u.depth() - out.depth();
  out.tail = PeriodicTail{ut.from - removed_levels, t.period, base};
  ValidationReport r = validate_diagram(out);
  if (!r.valid())
    throw Inconsistency("trimmed diagram is invalid at level " + std::to_string(r.issues[0].level) +
                        ": " + r.issues[0].message);
  return out;
}

}  // namespace

Diagram trim_dimension_one(const Diagram& d) {
  require_valid(d);
  QuotientProperties q = check_quotient_properties(d, d.depth());
  if (q.has_C.value != Tri::no) {
    std::string why = q.has_C.certificate ? q.has_C.certificate->note : q.has_C.reason;
    throw PreconditionError(std::string("trim refused: has_C_quotient is ") + to_string(q.has_C.value) +
                            " (" + why + ")");
  }
  return trim_unchecked(d);
}

namespace {

Diagram normalize(const Diagram& d, int max_depth, GapRule rule) {
  require_valid(d);
  QuotientProperties q = check_quotient_properties(d, max_depth);
  const TriResult& r = rule == GapRule::findim ? q.has_findim : q.has_unital;
  const char* flag = rule == GapRule::findim ? "has_findim_quotient" : "has_unital_quotient";
  if (r.value != Tri::no) {
    std::string why = r.certificate ? r.certificate->note : r.reason;
    throw PreconditionError(std::string("normalize refused: ") + flag + " is " + to_string(r.value) +
                            " (" + why + ")");
  }
  Diagram t = truncate(d, d.tail ? max_depth : std::min(max_depth, d.depth()));
  Diagram trimmed = trim_unchecked(t);
  std::vector<std::string> stuck;
  std::vector<int> kept = greedy_telescoping(trimmed, rule, &stuck);
  if (kept.size() < 2)
    throw UnknownAtDepth("no telescoping within depth " + std::to_string(max_depth) +
                             " meets the target condition",
                         stuck);
  return telescope(trimmed, kept);
}

}  // namespace

Diagram normalize_fd(const Diagram& d, int max_depth) { return normalize(d, max_depth, GapRule::findim); }

Diagram normalize_unital(const Diagram& d, int max_depth) {
  return normalize(d, max_depth, GapRule::strict);
}

}  // namespace bratteli
