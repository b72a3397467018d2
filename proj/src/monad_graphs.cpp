// Monads whose operations are ordered (optionally directed) graphs of an
// insertional class: cyclic operads, modular operads, dioperads, half-PROPs,
// properads, PROPs and the wheeled variants. Multiplication is ordered graph
// insertion. Operations are stored as canonical representatives; vertex ids
// of the representative are the fiber slots.

#include <algorithm>
#include <deque>
#include <mutex>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "polymnd/graph.hpp"
#include "polymnd/monad.hpp"

namespace polymnd {

namespace {

struct GOp {
  OrderedGraph og;
  std::vector<int> orient;  // empty for undirected classes
};

struct Stub {
  int v, pos;
  bool incoming;
};

struct ClassSpec {
  std::string name;
  bool directed = false;
  bool connected = true;
  bool tree = false;          // contractible
  bool loop_free = false;     // no directed cycles
  bool wheeled_operad = false;  // every vertex out-degree 1, at most one cycle
  int min_vertex_flags = 0;       // undirected vertex arity floor
  bool vertex_in_out_positive = false;  // directed: in>=1 and out>=1 per vertex
  int min_vertex_total = 0;             // directed: in+out floor
  bool halfprop = false;                // every vertex has in==1 or out==1
  int min_legs = 0;                     // undirected colour floor
  bool legs_in_out_positive = false;    // directed colour floor (m,n >= 1)
};

ClassSpec spec_for(const std::string& which) {
  ClassSpec s;
  s.name = which;
  auto base = which;
  bool normal = false, reduced = false, cf = false;
  auto strip = [&](const std::string& suffix, bool& flag) {
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
      base = base.substr(0, base.size() - suffix.size() - 1);
      flag = true;
    }
  };
  strip("normal", normal);
  strip("reduced", reduced);
  strip("constant-free", cf);
  if (base == "cyclic") {
    s.tree = true;
    if (normal) { s.min_vertex_flags = 3; s.min_legs = 3; }
    else if (cf) { s.min_vertex_flags = 2; s.min_legs = 2; }
    else if (reduced) { s.min_legs = 1; }
  } else if (base == "modular") {
    if (normal) { s.min_vertex_flags = 3; s.min_legs = 3; }
  } else if (base == "dioperads") {
    s.directed = true;
    s.tree = true;
    s.loop_free = true;
    if (normal) { s.vertex_in_out_positive = true; s.min_vertex_total = 3;
                  s.legs_in_out_positive = true; }
  } else if (base == "halfprops") {
    s.directed = true;
    s.tree = true;
    s.loop_free = true;
    s.halfprop = true;
    if (normal) { s.vertex_in_out_positive = true; s.min_vertex_total = 3;
                  s.legs_in_out_positive = true; }
  } else if (base == "properads") {
    s.directed = true;
    s.loop_free = true;
    if (normal) { s.vertex_in_out_positive = true; s.legs_in_out_positive = true; }
  } else if (base == "props") {
    s.directed = true;
    s.connected = false;
    s.loop_free = true;
    if (normal) { s.vertex_in_out_positive = true; s.legs_in_out_positive = true; }
  } else if (base == "wheeled-operads") {
    s.directed = true;
    s.wheeled_operad = true;
    if (normal) s.min_vertex_total = 3;  // every vertex >= 2 inputs
  } else if (base == "wheeled-properads") {
    s.directed = true;
    if (normal) { s.vertex_in_out_positive = true; s.legs_in_out_positive = true; }
  } else {
    throw std::invalid_argument("unknown graph class " + which);
  }
  return s;
}

class GraphMonad final : public PolynomialMonad {
 public:
  explicit GraphMonad(ClassSpec spec) : spec_(std::move(spec)) {}

  std::string name() const override { return spec_.name; }

  // per-vertex (in,out) flag counts; undirected: (total, 0)
  std::pair<int, int> vertex_shape(const GOp& op, int v) const {
    int in = 0, out = 0;
    for (int f : op.og.vertex_order[v]) {
      if (!spec_.directed) ++in;
      else {
        int e = op.og.g.edge_of(f);
        bool src = op.og.g.edges[e][op.orient[e]] == f;
        (src ? out : in)++;
      }
    }
    return {in, out};
  }
  std::pair<int, int> legs(const GOp& op) const {
    int in = 0, out = 0;
    for (int f : op.og.free_order) {
      if (!spec_.directed) ++in;
      else {
        int e = op.og.g.edge_of(f);
        bool src = op.og.g.edges[e][op.orient[e]] == f;
        // a free source end points into the graph: an input leg
        (src ? in : out)++;
      }
    }
    return {in, out};
  }
  static std::string colour_key(bool directed, std::pair<int, int> mn) {
    return directed ? std::to_string(mn.first) + "," + std::to_string(mn.second)
                    : std::to_string(mn.first);
  }

  bool vertex_ok(const GOp& op, int v) const {
    auto [in, out] = vertex_shape(op, v);
    int total = in + out;
    if (!spec_.directed) return total >= spec_.min_vertex_flags;
    if (spec_.vertex_in_out_positive && (in < 1 || out < 1)) return false;
    if (total < spec_.min_vertex_total) return false;
    if (spec_.halfprop && !(in == 1 || out == 1)) return false;
    if (spec_.wheeled_operad && out != 1) return false;
    if (spec_.wheeled_operad && spec_.min_vertex_total >= 3 && in < 2) return false;
    return true;
  }

  bool op_ok(const GOp& op) const {
    if (op.og.g.nv < 1) return false;
    auto cls = classify(op.og.g);
    if (spec_.connected && !cls.connected) return false;
    if (!spec_.connected) {
      // every component still needs a vertex: no free-living parts
      for (int e = 0; e < op.og.g.ne(); ++e) {
        auto& ed = op.og.g.edges[e];
        if (op.og.g.flag_vertex[ed[0]] < 0 && op.og.g.flag_vertex[ed[1]] < 0)
          return false;
      }
    }
    if (spec_.tree && !cls.tree) return false;
    if (!spec_.tree && spec_.connected && !spec_.directed) {
      // undirected non-tree classes (modular): fine
    }
    for (int v = 0; v < op.og.g.nv; ++v)
      if (!vertex_ok(op, v)) return false;
    if (spec_.directed) {
      DirectedGraph dg{op.og.g, op.orient};
      bool has_cycle = dg.has_directed_loop();
      if (spec_.loop_free && has_cycle) return false;
      if (spec_.wheeled_operad) {
        auto [in, out] = legs(op);
        (void)in;
        if (has_cycle ? out != 0 : out != 1) return false;
      }
    }
    auto l = legs(op);
    if (!spec_.directed && l.first < spec_.min_legs) return false;
    if (spec_.directed && spec_.legs_in_out_positive && (l.first < 1 || l.second < 1))
      return false;
    return true;
  }

  std::string colour_of(OpId b) override {
    return colour_key(spec_.directed, legs(op(b)));
  }
  std::vector<std::string> sources(OpId b) override {
    std::vector<std::string> out;
    for (int v = 0; v < op(b).og.g.nv; ++v)
      out.push_back(colour_key(spec_.directed, vertex_shape(op(b), v)));
    return out;
  }
  int size(OpId b) override { return op(b).og.g.ne(); }
  bool is_unit(OpId b) override {
    const GOp& o = op(b);
    if (o.og.g.nv != 1) return false;
    return b == unit(colour_of(b));
  }
  OpId unit(const std::string& colour) override {
    auto [m, n] = parse_colour(colour);
    GOp o = corolla(m, n);
    if (!op_ok(o)) throw std::invalid_argument(spec_.name + ": no unit for " + colour);
    return intern(o);
  }
  GOp corolla(int in_legs, int out_legs) const {
    // vertex flags: [ins..., outs...]; each on an external edge
    GOp o;
    int total = in_legs + out_legs;
    Graph& g = o.og.g;
    g.nv = 1;
    for (int i = 0; i < total; ++i) {
      int fv = (int)g.flag_vertex.size();
      g.flag_vertex.push_back(0);
      int ff = (int)g.flag_vertex.size();
      g.flag_vertex.push_back(-1);
      g.edges.push_back({fv, ff});
      bool is_in = i < in_legs;
      if (spec_.directed) o.orient.push_back(is_in ? 1 : 0);  // in: free end source
    }
    o.og.vertex_order.resize(1);
    for (int i = 0; i < total; ++i) o.og.vertex_order[0].push_back(2 * i);
    for (int i = 0; i < total; ++i) o.og.free_order.push_back(2 * i + 1);
    return o;
  }
  SubstResult substitute(OpId b, const std::vector<OpId>& args) override {
    auto srcs = sources(b);
    if (srcs.size() != args.size())
      throw std::invalid_argument(spec_.name + ": arity mismatch");
    for (size_t i = 0; i < args.size(); ++i)
      if (colour_of(args[i]) != srcs[i])
        throw std::invalid_argument(spec_.name + ": colour mismatch");
    GOp cur = op(b);
    int k = (int)args.size();
    // tags: per current vertex, (host slot pending) or (slot, arg vertex)
    struct Tag {
      bool pending;
      int slot;
      int argv;
    };
    std::vector<Tag> tags;
    for (int v = 0; v < cur.og.g.nv; ++v) tags.push_back({true, v, -1});
    for (int i = 0; i < k; ++i) {
      // current index of host slot i
      int vcur = -1;
      for (int v = 0; v < (int)tags.size(); ++v)
        if (tags[v].pending && tags[v].slot == i) vcur = v;
      const GOp& a = op(args[i]);
      auto ins = insert_ordered_ex(cur.og, vcur, a.og);
      // orientations
      std::vector<int> norient;
      if (spec_.directed) {
        norient.assign(ins.og.g.ne(), -1);
        for (int e = 0; e < (int)ins.g_edge_image.size(); ++e)
          if (ins.g_edge_image[e] >= 0) norient[ins.g_edge_image[e]] = cur.orient[e];
        for (int e = 0; e < (int)ins.g2_edge_image.size(); ++e)
          if (ins.g2_edge_image[e] >= 0) norient[ins.g2_edge_image[e]] = a.orient[e];
        for (int e = 0; e < (int)norient.size(); ++e)
          if (norient[e] < 0)
            throw std::runtime_error(spec_.name + ": orientation lost in insertion");
      }
      std::vector<Tag> ntags(ins.og.g.nv, {false, -1, -1});
      for (int v = 0; v < (int)tags.size(); ++v)
        if (ins.g_vertex_image[v] >= 0) ntags[ins.g_vertex_image[v]] = tags[v];
      for (int w = 0; w < (int)ins.g2_vertex_image.size(); ++w)
        ntags[ins.g2_vertex_image[w]] = {false, i, w};
      cur.og = ins.og;
      cur.orient = norient;
      tags = ntags;
    }
    auto canon = canonical_relabel(cur.og, spec_.directed ? &cur.orient : nullptr);
    GOp out{canon.og, canon.orient};
    SubstResult r;
    r.op = intern_canonical(out, canon.key);
    r.slot_origin.assign(tags.size(), {-1, -1});
    for (int v = 0; v < (int)tags.size(); ++v)
      r.slot_origin[canon.vmap[v]] = {tags[v].slot, tags[v].argv};
    return r;
  }
  std::vector<OpId> enumerate(int max_size) override {
    auto it = enum_cache_.find(max_size);
    if (it != enum_cache_.end()) return it->second;
    std::vector<OpId> out;
    std::set<std::string> seen;
    int maxv = max_size;  // each vertex adds at least one edge-ish; safe cap
    for (int V = 1; V <= maxv; ++V) enumerate_v(V, max_size, out, seen);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    enum_cache_[max_size] = out;
    return out;
  }
  std::string op_key(OpId b) override { return keys_.at(b); }
  std::vector<std::pair<int, int>> slot_adjacency(OpId b) override {
    std::vector<std::pair<int, int>> out;
    const Graph& g = op(b).og.g;
    for (int e = 0; e < g.ne(); ++e) {
      int u = g.flag_vertex[g.edges[e][0]];
      int w = g.flag_vertex[g.edges[e][1]];
      if (u >= 0 && w >= 0 && u != w) out.push_back({std::min(u, w), std::max(u, w)});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  bool has_nullary_ops() const override { return false; }
  bool has_size_preserving_subs() const override { return true; }

  const GOp& op(OpId b) const { return store_.at(b); }
  OpId intern(const GOp& o) {
    auto canon = canonical_relabel(o.og, spec_.directed ? &o.orient : nullptr);
    return intern_canonical({canon.og, canon.orient}, canon.key);
  }
  OpId intern_canonical(const GOp& o, const std::string& key) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    OpId id = (OpId)store_.size();
    store_.push_back(o);
    keys_.push_back(key);
    index_[key] = id;
    return id;
  }

 private:
  static std::pair<int, int> parse_colour(const std::string& c) {
    auto comma = c.find(',');
    if (comma == std::string::npos) return {std::stoi(c), 0};
    return {std::stoi(c.substr(0, comma)), std::stoi(c.substr(comma + 1))};
  }

  void enumerate_v(int V, int max_edges, std::vector<OpId>& out,
                   std::set<std::string>& seen) {
    // degree vectors: per vertex (in,out) for directed, (total,0) otherwise
    int floor_total = spec_.directed
                          ? std::max(spec_.min_vertex_total,
                                     spec_.vertex_in_out_positive ? 2 : 1)
                          : std::max(1, spec_.min_vertex_flags);
    // total flags bounded: edges <= max => stubs <= 2*max
    std::vector<std::pair<int, int>> deg(V);
    std::function<void(int, int)> rec = [&](int v, int remaining) {
      if (v == V) {
        wire(deg, max_edges, out, seen);
        return;
      }
      for (int total = floor_total; total <= remaining; ++total) {
        if (!spec_.directed) {
          deg[v] = {total, 0};
          rec(v + 1, remaining - total);
        } else {
          int inmin = spec_.vertex_in_out_positive ? 1 : 0;
          for (int in = inmin; in <= total - (spec_.vertex_in_out_positive ? 1 : 0);
               ++in) {
            int o2 = total - in;
            if (spec_.wheeled_operad && o2 != 1) continue;
            if (spec_.halfprop && !(in == 1 || o2 == 1)) continue;
            deg[v] = {in, o2};
            rec(v + 1, remaining - total);
          }
        }
      }
    };
    rec(0, 2 * max_edges);
  }

  void wire(const std::vector<std::pair<int, int>>& deg, int max_edges,
            std::vector<OpId>& out, std::set<std::string>& seen) {
    // stubs: (vertex, position); directed: positions [0,in) incoming,
    // [in, in+out) outgoing
    std::vector<Stub> stubs;
    int V = (int)deg.size();
    for (int v = 0; v < V; ++v) {
      for (int i = 0; i < deg[v].first; ++i) stubs.push_back({v, i, true});
      for (int i = 0; i < deg[v].second; ++i)
        stubs.push_back({v, deg[v].first + i, false});
    }
    int S = (int)stubs.size();
    // matching: pair stubs internally (directed: out with in), the rest
    // become legs; edges = internal + external = S - internal <= max_edges
    std::vector<int> mate(S, -1);
    std::function<void(int)> match = [&](int s0) {
      int internal = 0;
      for (int s = 0; s < S; ++s)
        if (mate[s] >= 0) ++internal;
      internal /= 2;
      int edges = S - internal;
      if (edges <= max_edges) emit(deg, stubs, mate, out, seen);
      // try adding one more internal pair starting from s0
      for (int a = s0; a < S; ++a) {
        if (mate[a] >= 0) continue;
        for (int b = a + 1; b < S; ++b) {
          if (mate[b] >= 0) continue;
          if (spec_.directed && stubs[a].incoming == stubs[b].incoming) continue;
          if (!allow_self_edge() && stubs[a].v == stubs[b].v) continue;
          mate[a] = b;
          mate[b] = a;
          match(a + 1);
          mate[a] = -1;
          mate[b] = -1;
        }
      }
    };
    match(0);
  }

  bool allow_self_edge() const {
    // self edges create directed loops or non-tree cycles; only classes
    // allowing cycles can use them
    if (spec_.tree || spec_.loop_free) return false;
    return true;
  }

  void emit(const std::vector<std::pair<int, int>>& deg, const std::vector<Stub>& stubs,
            const std::vector<int>& mate, std::vector<OpId>& out,
            std::set<std::string>& seen) {
    int V = (int)deg.size();
    int S = (int)stubs.size();
    // flags: vertex flag per stub; external stubs also get a free flag
    GOp o;
    Graph& g = o.og.g;
    g.nv = V;
    std::vector<int> stub_flag(S);
    for (int s = 0; s < S; ++s) {
      stub_flag[s] = (int)g.flag_vertex.size();
      g.flag_vertex.push_back(stubs[s].v);
    }
    std::vector<int> ext;  // external stub ids
    for (int s = 0; s < S; ++s) {
      if (mate[s] < 0) ext.push_back(s);
      else if (mate[s] > s) {
        g.edges.push_back({stub_flag[s], stub_flag[mate[s]]});
        if (spec_.directed) o.orient.push_back(stubs[s].incoming ? 1 : 0);
      }
    }
    std::vector<int> ext_free(ext.size());
    for (size_t i = 0; i < ext.size(); ++i) {
      int ff = (int)g.flag_vertex.size();
      g.flag_vertex.push_back(-1);
      ext_free[i] = ff;
      g.edges.push_back({stub_flag[ext[i]], ff});
      if (spec_.directed) o.orient.push_back(stubs[ext[i]].incoming ? 1 : 0);
    }
    o.og.vertex_order.assign(V, {});
    for (int s = 0; s < S; ++s) o.og.vertex_order[stubs[s].v].push_back(stub_flag[s]);
    // leg order: all permutations of the external stubs (directed: inputs
    // then outputs, permuted within the groups)
    std::vector<int> in_ext, out_ext;
    for (size_t i = 0; i < ext.size(); ++i) {
      if (spec_.directed && !stubs[ext[i]].incoming) out_ext.push_back((int)i);
      else in_ext.push_back((int)i);
    }
    auto try_orderings = [&](std::vector<int>& group1, std::vector<int>& group2) {
      std::sort(group1.begin(), group1.end());
      do {
        std::sort(group2.begin(), group2.end());
        std::vector<int> g2copy = group2;
        do {
          o.og.free_order.clear();
          for (int i : group1) o.og.free_order.push_back(ext_free[i]);
          for (int i : g2copy) o.og.free_order.push_back(ext_free[i]);
          if (!op_ok(o)) continue;
          auto canon = canonical_relabel(o.og, spec_.directed ? &o.orient : nullptr);
          if (seen.insert(canon.key).second)
            out.push_back(intern_canonical({canon.og, canon.orient}, canon.key));
        } while (std::next_permutation(g2copy.begin(), g2copy.end()));
        group2 = g2copy;
      } while (std::next_permutation(group1.begin(), group1.end()));
    };
    if (in_ext.empty() && out_ext.empty()) {
      o.og.free_order.clear();
      if (op_ok(o)) {
        auto canon = canonical_relabel(o.og, spec_.directed ? &o.orient : nullptr);
        if (seen.insert(canon.key).second)
          out.push_back(intern_canonical({canon.og, canon.orient}, canon.key));
      }
    } else {
      try_orderings(in_ext, out_ext);
    }
  }

  ClassSpec spec_;
  mutable std::mutex mu_;
  std::deque<GOp> store_;
  std::deque<std::string> keys_;
  std::map<std::string, OpId> index_;
  std::map<int, std::vector<OpId>> enum_cache_;
};

}  // namespace

MonadPtr make_graph_monad(const std::string& which) {
  return std::make_shared<GraphMonad>(spec_for(which));
}

}  // namespace polymnd
