#include "polymnd/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace polymnd {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

int Graph::edge_of(int f) const {
  for (int e = 0; e < ne(); ++e)
    if (edges[e][0] == f || edges[e][1] == f) return e;
  return -1;
}

int Graph::adjacent_flag(int f) const {
  int e = edge_of(f);
  return edges[e][0] == f ? edges[e][1] : edges[e][0];
}

bool Graph::flag_is_loop(int f) const {
  int e = edge_of(f);
  return e >= 0 && edges[e][0] == f && edges[e][1] == f;
}

bool Graph::edge_internal(int e) const {
  int f1 = edges[e][0], f2 = edges[e][1];
  if (f1 == f2) return true;  // free-living loop
  return flag_vertex[f1] >= 0 && flag_vertex[f2] >= 0;
}

std::vector<int> Graph::vertex_flags(int v) const {
  std::vector<int> out;
  for (int f = 0; f < nf(); ++f)
    if (flag_vertex[f] == v) out.push_back(f);
  return out;
}

std::vector<int> Graph::free_flags() const {
  std::vector<int> out;
  for (int f = 0; f < nf(); ++f)
    if (flag_free(f)) out.push_back(f);
  return out;
}

RawGraph Graph::raw() const {
  RawGraph r;
  r.nv = nv;
  r.nf = nf();
  r.flag_vertex = flag_vertex;
  for (auto& e : edges) r.edge_flags.push_back({e[0], e[1]});
  return r;
}

ValidationReport validate(const RawGraph& raw) {
  ValidationReport rep;
  for (int f = 0; f < raw.nf; ++f)
    if (raw.flag_vertex[f] < -1 || raw.flag_vertex[f] >= raw.nv)
      rep.push_back({"range", "flag " + std::to_string(f) + " attached to missing vertex"});
  std::vector<std::vector<int>> arrows(raw.nf);
  for (int e = 0; e < (int)raw.edge_flags.size(); ++e) {
    if ((int)raw.edge_flags[e].size() != 2)
      rep.push_back({"i", "edge " + std::to_string(e) + " has " +
                              std::to_string(raw.edge_flags[e].size()) +
                              " flag-arrows, expected 2"});
    for (int f : raw.edge_flags[e]) {
      if (f < 0 || f >= raw.nf) {
        rep.push_back({"range", "edge " + std::to_string(e) + " mentions missing flag"});
        continue;
      }
      arrows[f].push_back(e);
    }
  }
  for (int f = 0; f < raw.nf; ++f) {
    bool attached = raw.flag_vertex[f] >= 0;
    int n = (int)arrows[f].size();
    if (n == 0)
      rep.push_back({"ii", "flag " + std::to_string(f) + " lies on no edge"});
    if (n > 2)
      rep.push_back({"ii", "flag " + std::to_string(f) + " has " + std::to_string(n) +
                              " edge-arrows"});
    if (n == 2 && arrows[f][0] != arrows[f][1])
      rep.push_back({"ii", "flag " + std::to_string(f) +
                              " has two edge-arrows on different edges (not parallel)"});
    if (attached && n != 1)
      rep.push_back({"ii", "attached flag " + std::to_string(f) +
                              " must have exactly one edge-arrow"});
  }
  return rep;
}

Graph make_graph(const RawGraph& raw) {
  auto rep = validate(raw);
  if (!rep.empty())
    throw std::invalid_argument("invalid graph: axiom " + rep.front().axiom + ": " +
                                rep.front().detail);
  Graph g;
  g.nv = raw.nv;
  g.flag_vertex = raw.flag_vertex;
  for (auto& ef : raw.edge_flags) g.edges.push_back({ef[0], ef[1]});
  return g;
}

GraphClass classify(const Graph& g) {
  GraphClass c;
  int nf = g.nf(), ne = g.ne();
  UnionFind uf(g.nv + nf);
  for (int f = 0; f < nf; ++f)
    if (g.flag_vertex[f] >= 0) uf.unite(f + g.nv, g.flag_vertex[f]);
  for (int e = 0; e < ne; ++e) uf.unite(g.edges[e][0] + g.nv, g.edges[e][1] + g.nv);
  std::set<int> comps;
  for (int v = 0; v < g.nv; ++v) comps.insert(uf.find(v));
  for (int f = 0; f < nf; ++f) comps.insert(uf.find(f + g.nv));
  bool empty = g.nv == 0 && nf == 0;
  c.connected = !empty && comps.size() == 1;

  int internal = 0, loops = 0, external = 0;
  for (int e = 0; e < ne; ++e) {
    if (g.is_loop_edge(e)) ++loops;
    if (g.edge_internal(e)) ++internal;
    else ++external;
  }
  auto tree_on = [](bool conn, int nv, int internal_edges, int loop_edges, int nedges) {
    if (!conn || loop_edges > 0) return false;
    if (nv == 0) return nedges == 1;  // free-living edge
    return internal_edges == nv - 1;
  };
  c.tree = tree_on(c.connected, g.nv, internal - loops, loops, ne);
  if (!empty) {
    std::map<int, std::array<int, 4>> per;  // comp -> {nv, internal, loops, ne}
    for (int v = 0; v < g.nv; ++v) per[uf.find(v)];
    for (int v = 0; v < g.nv; ++v) per[uf.find(v)][0]++;
    for (int e = 0; e < ne; ++e) {
      auto& st = per[uf.find(g.edges[e][0] + g.nv)];
      st[3]++;
      if (g.is_loop_edge(e)) st[2]++;
      else if (g.edge_internal(e)) st[1]++;
    }
    c.forest = true;
    for (auto& [root, st] : per)
      if (!tree_on(true, st[0], st[1], st[2], st[3])) c.forest = false;
  }

  c.corolla = c.connected && g.nv == 1 && internal == 0;
  c.free_living_edge = g.nv == 0 && ne == 1 && loops == 0;
  c.free_living_loop = g.nv == 0 && ne == 1 && loops == 1;
  c.pointed_loop = g.nv == 1 && ne == 1 && g.edge_internal(0) && !g.is_loop_edge(0);

  if (c.free_living_edge) c.linear_tree = 0;
  if (c.tree && g.nv >= 1) {
    bool linear = true;
    for (int v = 0; v < g.nv; ++v)
      if ((int)g.vertex_flags(v).size() != 2) linear = false;
    if (linear && external == 2) c.linear_tree = g.nv;
  }
  if (c.connected && external == 0 && loops == 0 && internal == g.nv - 1 && g.nv >= 1) {
    int deg1 = 0;
    bool ok = true;
    for (int v = 0; v < g.nv; ++v) {
      int d = (int)g.vertex_flags(v).size();
      if (d == 1) ++deg1;
      else if (d != 2) ok = false;
    }
    if (g.nv == 1) {
      if (nf == 0) c.linear_graph = 1;
    } else if (ok && deg1 == 2) {
      c.linear_graph = g.nv;
    }
  }
  return c;
}

// ---------- insertion ----------

namespace {

// Shared implementation that also reports where every flag of g and g2 went
// (-1 once a flag class was absorbed by edge concatenation).
struct InsertImages {
  std::vector<int> g_flag;   // g flag -> result flag or -1
  std::vector<int> g2_flag;  // g2 flag -> result flag or -1
  std::vector<int> g_vertex;
  std::vector<int> g2_vertex;
  std::vector<int> g_edge;   // g edge -> result edge or -1
  std::vector<int> g2_edge;  // g2 edge -> result edge or -1
};

Graph insert_impl(const Graph& g, int v, const Graph& g2, const std::vector<int>& rho,
                  InsertImages& im) {
  if (v < 0 || v >= g.nv) throw std::invalid_argument("insert: no such vertex");
  auto vflags = g.vertex_flags(v);
  auto free2 = g2.free_flags();
  if (rho.size() != free2.size())
    throw std::invalid_argument("insert: rho size mismatch");
  std::set<int> seen(rho.begin(), rho.end());
  if (seen.size() != rho.size()) throw std::invalid_argument("insert: rho not injective");
  for (int f : rho)
    if (f < 0 || f >= g.nf() || g.flag_vertex[f] != v)
      throw std::invalid_argument("insert: rho target is not a v-flag");
  if (rho.size() != vflags.size())
    throw std::invalid_argument("insert: rho not a bijection onto v-flags");

  int nf = g.nf(), nf2 = g2.nf();
  UnionFind uf(nf + nf2);
  std::vector<char> g2_edge_removed(g2.ne(), 0);
  for (size_t i = 0; i < free2.size(); ++i) {
    int f2 = free2[i];
    uf.unite(nf + f2, rho[i]);
    int e2 = g2.edge_of(f2);
    if (!g2.edge_internal(e2)) {
      g2_edge_removed[e2] = 1;
      uf.unite(nf + g2.edges[e2][0], nf + g2.edges[e2][1]);
    }
  }

  std::vector<int> cls(nf + nf2, -1);
  std::vector<int> cls_vertex;
  int ncls = 0;
  for (int x = 0; x < nf + nf2; ++x) {
    int r = uf.find(x);
    if (cls[r] < 0) {
      cls[r] = ncls++;
      cls_vertex.push_back(-1);
    }
  }
  auto class_of = [&](int x) { return cls[uf.find(x)]; };

  std::vector<int> gv(g.nv, -1);
  int nv = 0;
  for (int u = 0; u < g.nv; ++u)
    if (u != v) gv[u] = nv++;
  std::vector<int> g2v(g2.nv, -1);
  for (int u = 0; u < g2.nv; ++u) g2v[u] = nv++;

  for (int f = 0; f < nf; ++f) {
    int u = g.flag_vertex[f];
    if (u >= 0 && u != v) cls_vertex[class_of(f)] = gv[u];
  }
  for (int f2 = 0; f2 < nf2; ++f2) {
    int u = g2.flag_vertex[f2];
    if (u >= 0) cls_vertex[class_of(nf + f2)] = g2v[u];
  }

  std::vector<std::array<int, 2>> edges;
  std::vector<int> g_edge_pos(g.ne()), g2_edge_pos(g2.ne(), -1);
  for (int e = 0; e < g.ne(); ++e) {
    g_edge_pos[e] = (int)edges.size();
    edges.push_back({class_of(g.edges[e][0]), class_of(g.edges[e][1])});
  }
  for (int e2 = 0; e2 < g2.ne(); ++e2)
    if (!g2_edge_removed[e2]) {
      g2_edge_pos[e2] = (int)edges.size();
      edges.push_back({class_of(nf + g2.edges[e2][0]), class_of(nf + g2.edges[e2][1])});
    }

  // A free class lying on two distinct edges concatenates them and vanishes.
  std::vector<char> edge_dead(edges.size(), 0), cls_dead(ncls, 0);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::vector<std::pair<int, int>>> occ(ncls);
    for (int e = 0; e < (int)edges.size(); ++e) {
      if (edge_dead[e]) continue;
      occ[edges[e][0]].push_back({e, 0});
      occ[edges[e][1]].push_back({e, 1});
    }
    for (int c = 0; c < ncls; ++c) {
      if (cls_dead[c] || cls_vertex[c] >= 0 || occ[c].size() != 2) continue;
      auto [e1, s1] = occ[c][0];
      auto [e2, s2] = occ[c][1];
      if (e1 == e2) continue;  // parallel slots: legal loop flag
      edges[e1] = {edges[e1][1 - s1], edges[e2][1 - s2]};
      edge_dead[e2] = 1;
      cls_dead[c] = 1;
      changed = true;
      break;
    }
  }

  std::vector<char> used(ncls, 0);
  for (int e = 0; e < (int)edges.size(); ++e) {
    if (edge_dead[e]) continue;
    used[edges[e][0]] = used[edges[e][1]] = 1;
  }
  std::vector<int> cls_new(ncls, -1);
  std::vector<int> edge_new(edges.size(), -1);
  Graph out;
  out.nv = nv;
  for (int c = 0; c < ncls; ++c) {
    if (!used[c] || cls_dead[c]) continue;
    cls_new[c] = (int)out.flag_vertex.size();
    out.flag_vertex.push_back(cls_vertex[c]);
  }
  for (int e = 0; e < (int)edges.size(); ++e) {
    if (edge_dead[e]) continue;
    edge_new[e] = (int)out.edges.size();
    out.edges.push_back({cls_new[edges[e][0]], cls_new[edges[e][1]]});
  }

  im.g_flag.assign(nf, -1);
  im.g2_flag.assign(nf2, -1);
  for (int f = 0; f < nf; ++f) im.g_flag[f] = cls_new[class_of(f)];
  for (int f2 = 0; f2 < nf2; ++f2) im.g2_flag[f2] = cls_new[class_of(nf + f2)];
  im.g_vertex = gv;
  im.g2_vertex = g2v;
  im.g_edge.assign(g.ne(), -1);
  for (int e = 0; e < g.ne(); ++e) im.g_edge[e] = edge_new[g_edge_pos[e]];
  im.g2_edge.assign(g2.ne(), -1);
  for (int e2 = 0; e2 < g2.ne(); ++e2)
    if (g2_edge_pos[e2] >= 0) im.g2_edge[e2] = edge_new[g2_edge_pos[e2]];
  return out;
}

}  // namespace

InsertResult insert(const Graph& g, int v, const Graph& g2, const std::vector<int>& rho) {
  InsertImages im;
  InsertResult res;
  res.graph = insert_impl(g, v, g2, rho, im);
  res.g2_vertex_image = im.g2_vertex;
  res.g_vertex_image = im.g_vertex;
  return res;
}

// ---------- contraction ----------

namespace {

struct Extracted {
  Graph sub;
  std::vector<int> vmap;  // g vertex -> sub vertex (-1 outside)
  std::vector<int> fmap;  // g flag -> sub flag (-1 outside)
  std::vector<int> sub_ext_edge;
  std::vector<int> cut_g_edge;
};

Extracted extract_plain(const Graph& g, const std::vector<int>& verts) {
  Extracted ex;
  ex.vmap.assign(g.nv, -1);
  int nv = 0;
  for (int v : verts) {
    if (v < 0 || v >= g.nv || ex.vmap[v] >= 0)
      throw std::invalid_argument("contract: bad vertex set");
    ex.vmap[v] = nv++;
  }
  ex.fmap.assign(g.nf(), -1);
  Graph& s = ex.sub;
  s.nv = nv;
  for (int f = 0; f < g.nf(); ++f) {
    int v = g.flag_vertex[f];
    if (v >= 0 && ex.vmap[v] >= 0) {
      ex.fmap[f] = (int)s.flag_vertex.size();
      s.flag_vertex.push_back(ex.vmap[v]);
    }
  }
  for (int e = 0; e < g.ne(); ++e) {
    int f1 = g.edges[e][0], f2 = g.edges[e][1];
    bool in1 = ex.fmap[f1] >= 0;
    bool in2 = f1 != f2 && ex.fmap[f2] >= 0;
    if (in1 && in2) {
      s.edges.push_back({ex.fmap[f1], ex.fmap[f2]});
    } else if (in1 || in2) {
      int fin = in1 ? ex.fmap[f1] : ex.fmap[f2];
      int fresh = (int)s.flag_vertex.size();
      s.flag_vertex.push_back(-1);
      s.edges.push_back({fin, fresh});
      ex.sub_ext_edge.push_back((int)s.edges.size() - 1);
      ex.cut_g_edge.push_back(e);
    }
  }
  return ex;
}

}  // namespace

ContractResult contract(const Graph& g, const std::vector<int>& sub_vertices) {
  Extracted ex = extract_plain(g, sub_vertices);
  auto subcls = classify(ex.sub);
  if (!subcls.tree)
    throw std::invalid_argument("contract: vertex set is not a plain subtree");

  ContractResult res;
  res.sub = ex.sub;
  res.sub_vertices = sub_vertices;

  Graph out;
  std::vector<int> vmap(g.nv, -1);
  for (int v = 0; v < g.nv; ++v)
    if (ex.vmap[v] < 0) vmap[v] = out.nv++;
  int newv = out.nv++;
  res.new_vertex = newv;

  std::vector<int> fmap(g.nf(), -1);
  for (int f = 0; f < g.nf(); ++f) {
    int v = g.flag_vertex[f];
    if (v >= 0 && ex.vmap[v] >= 0) continue;
    fmap[f] = (int)out.flag_vertex.size();
    out.flag_vertex.push_back(v >= 0 ? vmap[v] : -1);
  }
  std::vector<int> cutflag(ex.cut_g_edge.size());
  for (size_t i = 0; i < ex.cut_g_edge.size(); ++i) {
    cutflag[i] = (int)out.flag_vertex.size();
    out.flag_vertex.push_back(newv);
  }
  res.new_vertex_flag_for_sub_external = cutflag;

  std::map<int, int> cut_of_edge;
  for (size_t i = 0; i < ex.cut_g_edge.size(); ++i) cut_of_edge[ex.cut_g_edge[i]] = (int)i;

  for (int e = 0; e < g.ne(); ++e) {
    int f1 = g.edges[e][0], f2 = g.edges[e][1];
    bool in1 = ex.fmap[f1] >= 0;
    bool in2 = ex.fmap[f2] >= 0;
    if (in1 && in2) continue;
    if (!in1 && !in2) out.edges.push_back({fmap[f1], fmap[f2]});
    else {
      int fout = in1 ? f2 : f1;
      out.edges.push_back({fmap[fout], cutflag[cut_of_edge[e]]});
    }
  }
  res.graph = std::move(out);

  for (int e = 0; e < g.ne(); ++e)
    if (!g.edge_internal(e)) res.external_edges_g.push_back(e);
  res.external_edges_sub = ex.sub_ext_edge;

  auto in_sub = [&](int v) { return v >= 0 && ex.vmap[v] >= 0; };
  for (int eg : res.external_edges_g) {
    // unique path of edges from eg into the subtree avoiding its vertices
    std::vector<int> stack = {eg};
    std::set<int> seen = {eg};
    int found = -1;
    while (!stack.empty()) {
      int e = stack.back();
      stack.pop_back();
      if (cut_of_edge.count(e)) { found = e; break; }
      for (int s = 0; s < 2; ++s) {
        int f = g.edges[e][s];
        int v = g.flag_vertex[f];
        if (v < 0 || in_sub(v)) continue;
        for (int vf : g.vertex_flags(v)) {
          int e2 = g.edge_of(vf);
          if (!seen.count(e2)) {
            seen.insert(e2);
            stack.push_back(e2);
          }
        }
      }
    }
    if (found < 0)
      throw std::invalid_argument("contract: external edge has no path to subtree");
    res.c_map.push_back(ex.sub_ext_edge[cut_of_edge[found]]);
  }
  return res;
}

// ---------- canonical forms, iso, automorphisms ----------

namespace {

std::string encode_under(const Graph& g, const std::vector<int>& flag_perm) {
  int nf = g.nf();
  std::vector<int> inv(nf);
  for (int f = 0; f < nf; ++f) inv[flag_perm[f]] = f;
  std::vector<int> vmap(g.nv, -1);
  int vn = 0;
  for (int nfl = 0; nfl < nf; ++nfl) {
    int v = g.flag_vertex[inv[nfl]];
    if (v >= 0 && vmap[v] < 0) vmap[v] = vn++;
  }
  std::vector<std::pair<int, int>> es;
  for (auto& e : g.edges) {
    int a = flag_perm[e[0]], b = flag_perm[e[1]];
    es.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(es.begin(), es.end());
  std::ostringstream os;
  os << g.nv << ';';
  for (int nfl = 0; nfl < nf; ++nfl) {
    int v = g.flag_vertex[inv[nfl]];
    os << (v >= 0 ? vmap[v] : -1) << ',';
  }
  os << ';';
  for (auto& [a, b] : es) os << a << '-' << b << ',';
  return os.str();
}

// Iterated neighbourhood refinement; iso-invariant colouring of flags.
std::vector<long long> flag_colours(const Graph& g) {
  int nf = g.nf();
  std::vector<long long> col(nf);
  for (int f = 0; f < nf; ++f) {
    int v = g.flag_vertex[f];
    int vdeg = v >= 0 ? (int)g.vertex_flags(v).size() : -1;
    col[f] = (vdeg + 2) * 8 + (g.flag_is_loop(f) ? 4 : 0) +
             (g.edge_internal(g.edge_of(f)) ? 2 : 0) + (v >= 0 ? 1 : 0);
  }
  for (int round = 0; round < 3; ++round) {
    std::vector<long long> nxt(nf);
    for (int f = 0; f < nf; ++f) {
      long long h = col[f] * 1000003;
      h += col[g.adjacent_flag(f)] * 97;
      int v = g.flag_vertex[f];
      if (v >= 0) {
        std::vector<long long> sib;
        for (int vf : g.vertex_flags(v)) sib.push_back(col[vf]);
        std::sort(sib.begin(), sib.end());
        for (auto s : sib) h = h * 131 + s;
      }
      nxt[f] = h;
    }
    col = nxt;
  }
  return col;
}

// Backtracking minimum encoding with iso-invariant candidate restriction:
// at each depth only flags from the currently smallest unused colour class
// are tried.
void canon_rec(const Graph& g, const std::vector<long long>& col,
               std::vector<int>& perm, std::vector<char>& used, int depth,
               std::string& best) {
  int nf = g.nf();
  if (depth == nf) {
    std::string enc = encode_under(g, perm);
    if (best.empty() || enc < best) best = enc;
    return;
  }
  // prefer flags adjacent to already-placed structure for stability; candidate
  // set = unused flags with minimal colour among unused
  long long mincol = 0;
  bool have = false;
  for (int f = 0; f < nf; ++f)
    if (!used[f] && (!have || col[f] < mincol)) {
      mincol = col[f];
      have = true;
    }
  for (int f = 0; f < nf; ++f) {
    if (used[f] || col[f] != mincol) continue;
    perm[f] = depth;
    used[f] = 1;
    canon_rec(g, col, perm, used, depth + 1, best);
    used[f] = 0;
    perm[f] = -1;
  }
}

}  // namespace

std::string canonical_form(const Graph& g) {
  int nf = g.nf();
  if (nf == 0) return std::to_string(g.nv) + ";;";
  auto col = flag_colours(g);
  std::vector<int> perm(nf, -1);
  std::vector<char> used(nf, 0);
  std::string best;
  canon_rec(g, col, perm, used, 0, best);
  return best;
}

std::optional<std::pair<std::vector<int>, std::vector<int>>> iso(const Graph& a,
                                                                 const Graph& b) {
  if (a.nv != b.nv || a.nf() != b.nf() || a.ne() != b.ne()) return std::nullopt;
  int nf = a.nf();
  auto ca = flag_colours(a), cb = flag_colours(b);
  {
    auto sa = ca, sb = cb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::set<std::pair<int, int>> bedges;
  for (auto& e : b.edges) bedges.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});

  std::vector<int> fmap(nf, -1);
  std::vector<char> used(nf, 0);
  std::vector<int> vmap(a.nv, -1);
  std::vector<char> vused(b.nv, 0);

  std::function<bool(int)> rec = [&](int f) -> bool {
    if (f == nf) {
      for (auto& e : a.edges) {
        int x = fmap[e[0]], y = fmap[e[1]];
        if (!bedges.count({std::min(x, y), std::max(x, y)})) return false;
      }
      return true;
    }
    int adj = a.adjacent_flag(f);
    for (int t = 0; t < nf; ++t) {
      if (used[t] || ca[f] != cb[t]) continue;
      if (adj < f && fmap[adj] >= 0 && b.adjacent_flag(t) != fmap[adj]) continue;
      if (adj == f && b.adjacent_flag(t) != t) continue;
      int va = a.flag_vertex[f], vb = b.flag_vertex[t];
      if ((va >= 0) != (vb >= 0)) continue;
      bool newv = false;
      if (va >= 0) {
        if (vmap[va] >= 0 && vmap[va] != vb) continue;
        if (vmap[va] < 0) {
          if (vused[vb]) continue;
          vmap[va] = vb;
          vused[vb] = 1;
          newv = true;
        }
      }
      fmap[f] = t;
      used[t] = 1;
      if (rec(f + 1)) return true;
      used[t] = 0;
      fmap[f] = -1;
      if (newv) {
        vused[vb] = 0;
        vmap[va] = -1;
      }
    }
    return false;
  };
  if (nf == 0) {
    std::vector<int> vid(a.nv);
    std::iota(vid.begin(), vid.end(), 0);
    return std::make_pair(vid, std::vector<int>());
  }
  if (!rec(0)) return std::nullopt;
  return std::make_pair(vmap, fmap);
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> automorphisms(const Graph& g) {
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  int nf = g.nf();
  if (nf == 0) {
    std::vector<int> vid(g.nv);
    std::iota(vid.begin(), vid.end(), 0);
    out.push_back({vid, {}});
    return out;
  }
  auto col = flag_colours(g);
  std::set<std::pair<int, int>> edges;
  for (auto& e : g.edges) edges.insert({std::min(e[0], e[1]), std::max(e[0], e[1])});
  std::vector<int> fmap(nf, -1);
  std::vector<char> used(nf, 0);
  std::vector<int> vmap(g.nv, -1);
  std::vector<char> vused(g.nv, 0);

  std::function<void(int)> rec = [&](int f) {
    if (f == nf) {
      for (auto& e : g.edges) {
        int x = fmap[e[0]], y = fmap[e[1]];
        if (!edges.count({std::min(x, y), std::max(x, y)})) return;
      }
      out.push_back({vmap, fmap});
      return;
    }
    int adj = g.adjacent_flag(f);
    for (int t = 0; t < nf; ++t) {
      if (used[t] || col[f] != col[t]) continue;
      if (adj < f && fmap[adj] >= 0 && g.adjacent_flag(t) != fmap[adj]) continue;
      if (adj == f && g.adjacent_flag(t) != t) continue;
      int va = g.flag_vertex[f], vb = g.flag_vertex[t];
      if ((va >= 0) != (vb >= 0)) continue;
      bool newv = false;
      if (va >= 0) {
        if (vmap[va] >= 0 && vmap[va] != vb) continue;
        if (vmap[va] < 0) {
          if (vused[vb]) continue;
          vmap[va] = vb;
          vused[vb] = 1;
          newv = true;
        }
      }
      fmap[f] = t;
      used[t] = 1;
      rec(f + 1);
      used[t] = 0;
      fmap[f] = -1;
      if (newv) {
        vused[vb] = 0;
        vmap[va] = -1;
      }
    }
  };
  rec(0);
  return out;
}

// ---------- ordered graphs ----------

bool OrderedGraph::valid() const {
  auto ff = g.free_flags();
  if (free_order.size() != ff.size()) return false;
  std::set<int> fo(free_order.begin(), free_order.end());
  for (int f : ff)
    if (!fo.count(f)) return false;
  if ((int)vertex_order.size() != g.nv) return false;
  for (int v = 0; v < g.nv; ++v) {
    auto vf = g.vertex_flags(v);
    if (vertex_order[v].size() != vf.size()) return false;
    std::set<int> has(vertex_order[v].begin(), vertex_order[v].end());
    for (int f : vf)
      if (!has.count(f)) return false;
  }
  return true;
}

OrderedInsert insert_ordered_ex(const OrderedGraph& og, int v, const OrderedGraph& og2) {
  const std::vector<int>& vorder = og.vertex_order[v];
  const std::vector<int>& forder2 = og2.free_order;
  if (forder2.size() != vorder.size())
    throw std::invalid_argument("insert_ordered: cardinality mismatch");
  std::vector<int> asc = og2.g.free_flags();
  std::map<int, int> pos;
  for (size_t i = 0; i < forder2.size(); ++i) pos[forder2[i]] = (int)i;
  std::vector<int> rho(asc.size());
  for (size_t i = 0; i < asc.size(); ++i) rho[i] = vorder[pos[asc[i]]];

  InsertImages im;
  OrderedInsert res;
  OrderedGraph& out = res.og;
  out.g = insert_impl(og.g, v, og2.g, rho, im);

  for (int f : og.free_order) {
    int nfid = im.g_flag[f];
    if (nfid >= 0 && out.g.flag_free(nfid)) out.free_order.push_back(nfid);
  }
  out.vertex_order.assign(out.g.nv, {});
  for (int u = 0; u < og.g.nv; ++u) {
    if (u == v) continue;
    for (int f : og.vertex_order[u]) {
      int nfid = im.g_flag[f];
      if (nfid >= 0) out.vertex_order[im.g_vertex[u]].push_back(nfid);
    }
  }
  for (int u = 0; u < og2.g.nv; ++u)
    for (int f : og2.vertex_order[u]) {
      int nfid = im.g2_flag[f];
      if (nfid >= 0) out.vertex_order[im.g2_vertex[u]].push_back(nfid);
    }
  res.g_vertex_image = im.g_vertex;
  res.g2_vertex_image = im.g2_vertex;
  res.g_edge_image = im.g_edge;
  res.g2_edge_image = im.g2_edge;
  return res;
}

OrderedGraph insert_ordered(const OrderedGraph& og, int v, const OrderedGraph& og2) {
  return insert_ordered_ex(og, v, og2).og;
}

namespace {

std::vector<int> ordered_canonical_fnum(const OrderedGraph& og) {
  const Graph& g = og.g;
  int nf = g.nf();
  std::vector<int> fnum(nf, -1);
  int fc = 0;
  std::vector<int> queue;
  std::vector<char> vseen(g.nv, 0);
  auto touch = [&](int f) {
    if (f >= 0 && fnum[f] < 0) {
      fnum[f] = fc++;
      queue.push_back(f);
    }
  };
  size_t qi = 0;
  auto drain = [&]() {
    while (qi < queue.size()) {
      int f = queue[qi++];
      touch(g.adjacent_flag(f));
      for (int ff : {f, g.adjacent_flag(f)}) {
        int v = g.flag_vertex[ff];
        if (v >= 0 && !vseen[v]) {
          vseen[v] = 1;
          for (int vf : og.vertex_order[v]) touch(vf);
        }
      }
    }
  };
  for (int f : og.free_order) touch(f);
  drain();
  // Components without free flags: canonicalize each independently (min
  // encoding over seeds, with orders appended), then append the components
  // sorted by code.
  if (fc < nf) {
    // split remaining flags into connected components
    std::vector<int> comp(nf, -1);
    int nc = 0;
    for (int f0 = 0; f0 < nf; ++f0) {
      if (fnum[f0] >= 0 || comp[f0] >= 0) continue;
      std::vector<int> st = {f0};
      comp[f0] = nc;
      while (!st.empty()) {
        int f = st.back();
        st.pop_back();
        auto push = [&](int f2) {
          if (f2 >= 0 && fnum[f2] < 0 && comp[f2] < 0) {
            comp[f2] = nc;
            st.push_back(f2);
          }
        };
        push(g.adjacent_flag(f));
        int v = g.flag_vertex[f];
        if (v >= 0)
          for (int vf : og.vertex_order[v]) push(vf);
      }
      ++nc;
    }
    struct CompCanon {
      std::string code;
      std::vector<int> flags_in_local_order;
    };
    std::vector<CompCanon> canons(nc);
    for (int c = 0; c < nc; ++c) {
      std::vector<int> members;
      for (int f = 0; f < nf; ++f)
        if (comp[f] == c) members.push_back(f);
      std::string best;
      std::vector<int> bestord;
      for (int seed : members) {
        std::vector<int> local(nf, -1);
        std::vector<int> order;
        std::vector<char> vs(g.nv, 0);
        std::vector<int> q = {seed};
        local[seed] = 0;
        order.push_back(seed);
        size_t li = 0;
        auto tch = [&](int f) {
          if (f >= 0 && comp[f] == c && local[f] < 0) {
            local[f] = (int)order.size();
            order.push_back(f);
            q.push_back(f);
          }
        };
        while (li < q.size()) {
          int f = q[li++];
          tch(g.adjacent_flag(f));
          for (int ff : {f, g.adjacent_flag(f)}) {
            int v = g.flag_vertex[ff];
            if (v >= 0 && !vs[v]) {
              vs[v] = 1;
              for (int vf : og.vertex_order[v]) tch(vf);
            }
          }
        }
        // encode the component: attachments, edges, vertex orders
        std::ostringstream cs;
        std::vector<int> vmap(g.nv, -1);
        int vn = 0;
        for (int f : order) {
          int v = g.flag_vertex[f];
          if (v >= 0 && vmap[v] < 0) vmap[v] = vn++;
          cs << (v >= 0 ? vmap[v] : -1) << ',';
        }
        cs << ';';
        std::vector<std::pair<int, int>> es;
        for (auto& e : g.edges) {
          if (comp[e[0]] != c) continue;
          es.push_back({std::min(local[e[0]], local[e[1]]),
                        std::max(local[e[0]], local[e[1]])});
        }
        std::sort(es.begin(), es.end());
        for (auto& [a, b] : es) cs << a << '-' << b << ',';
        cs << ';';
        std::vector<std::pair<int, int>> vord;
        for (int v = 0; v < g.nv; ++v)
          if (vmap[v] >= 0) vord.push_back({vmap[v], v});
        std::sort(vord.begin(), vord.end());
        for (auto& [m, v] : vord) {
          for (int f : og.vertex_order[v]) cs << local[f] << ',';
          cs << ';';
        }
        std::string enc = cs.str();
        if (best.empty() || enc < best) {
          best = enc;
          bestord = order;
        }
      }
      canons[c] = {best, bestord};
    }
    std::sort(canons.begin(), canons.end(),
              [](const CompCanon& a, const CompCanon& b) { return a.code < b.code; });
    for (auto& cc : canons)
      for (int f : cc.flags_in_local_order) fnum[f] = fc++;
  }
  return fnum;
}

}  // namespace

std::string canonical_form(const OrderedGraph& og) {
  const Graph& g = og.g;
  std::vector<int> fnum = ordered_canonical_fnum(og);
  std::ostringstream os;
  os << encode_under(g, fnum) << "|fo:";
  for (int f : og.free_order) os << fnum[f] << ',';
  os << "|vo:";
  std::vector<std::pair<int, int>> vo;
  for (int v = 0; v < g.nv; ++v) {
    int m = 1 << 30;
    for (int f : og.vertex_order[v]) m = std::min(m, fnum[f]);
    vo.push_back({m, v});
  }
  std::sort(vo.begin(), vo.end());
  for (auto& [m, v] : vo) {
    for (int f : og.vertex_order[v]) os << fnum[f] << ',';
    os << ';';
  }
  return os.str();
}

OrderedCanon canonical_relabel(const OrderedGraph& og, const std::vector<int>* orient) {
  const Graph& g = og.g;
  int nf = g.nf();
  std::vector<int> fnum = ordered_canonical_fnum(og);
  OrderedCanon out;
  out.fmap = fnum;
  // vertex ranks: by minimal canonical flag; flagless vertices last
  std::vector<std::pair<int, int>> vr;
  for (int v = 0; v < g.nv; ++v) {
    int m = 1 << 30;
    for (int f : og.vertex_order[v]) m = std::min(m, fnum[f]);
    vr.push_back({m, v});
  }
  std::sort(vr.begin(), vr.end());
  out.vmap.assign(g.nv, -1);
  for (int i = 0; i < (int)vr.size(); ++i) out.vmap[vr[i].second] = i;

  Graph ng;
  ng.nv = g.nv;
  ng.flag_vertex.assign(nf, -1);
  for (int f = 0; f < nf; ++f)
    ng.flag_vertex[fnum[f]] = g.flag_vertex[f] >= 0 ? out.vmap[g.flag_vertex[f]] : -1;
  // edges sorted by (min slot, max slot), slots normalized min-first
  struct E {
    int a, b, src;  // src: 0 if a is the source end, 1 if b, -1 undirected
  };
  std::vector<E> es;
  for (int e = 0; e < g.ne(); ++e) {
    int a = fnum[g.edges[e][0]], b = fnum[g.edges[e][1]];
    int srcflag = orient ? fnum[g.edges[e][(*orient)[e]]] : -1;
    E ee;
    ee.a = std::min(a, b);
    ee.b = std::max(a, b);
    ee.src = orient ? (srcflag == ee.a ? 0 : 1) : -1;
    es.push_back(ee);
  }
  std::sort(es.begin(), es.end(), [](const E& x, const E& y) {
    return std::tie(x.a, x.b, x.src) < std::tie(y.a, y.b, y.src);
  });
  for (auto& e : es) {
    ng.edges.push_back({e.a, e.b});
    if (orient) out.orient.push_back(e.src);
  }
  out.og.g = std::move(ng);
  for (int f : og.free_order) out.og.free_order.push_back(fnum[f]);
  out.og.vertex_order.assign(g.nv, {});
  for (int v = 0; v < g.nv; ++v)
    for (int f : og.vertex_order[v]) out.og.vertex_order[out.vmap[v]].push_back(fnum[f]);

  std::ostringstream os;
  os << encode_under(out.og.g, [&] {
    std::vector<int> idp(nf);
    std::iota(idp.begin(), idp.end(), 0);
    return idp;
  }());
  os << "|fo:";
  for (int f : out.og.free_order) os << f << ',';
  os << "|vo:";
  for (int v = 0; v < g.nv; ++v) {
    for (int f : out.og.vertex_order[v]) os << f << ',';
    os << ';';
  }
  if (orient) {
    os << "|or:";
    for (int e = 0; e < (int)out.orient.size(); ++e)
      os << out.og.g.edges[e][out.orient[e]] << '>' << out.og.g.edges[e][1 - out.orient[e]]
         << ',';
  }
  out.key = os.str();
  return out;
}

bool DirectedGraph::flag_outgoing(int f) const {
  int e = g.edge_of(f);
  return g.edges[e][orientation[e]] == f;
}

bool DirectedGraph::has_directed_loop() const {
  for (int e = 0; e < g.ne(); ++e)
    if (g.is_loop_edge(e)) return true;
  std::vector<std::vector<int>> adj(g.nv);
  for (int e = 0; e < g.ne(); ++e) {
    int fs = g.edges[e][orientation[e]];
    int ft = g.edges[e][1 - orientation[e]];
    int u = g.flag_vertex[fs], w = g.flag_vertex[ft];
    if (u >= 0 && w >= 0) adj[u].push_back(w);
  }
  std::vector<int> state(g.nv, 0);
  std::function<bool(int)> cyc = [&](int u) -> bool {
    state[u] = 1;
    for (int w : adj[u]) {
      if (state[w] == 1) return true;
      if (state[w] == 0 && cyc(w)) return true;
    }
    state[u] = 2;
    return false;
  };
  for (int u = 0; u < g.nv; ++u)
    if (state[u] == 0 && cyc(u)) return true;
  return false;
}

std::string canonical_form(const DirectedGraph& dg, const OrderedGraph& og) {
  auto flag_token = [&](int f) {
    for (size_t i = 0; i < og.free_order.size(); ++i)
      if (og.free_order[i] == f) return "f" + std::to_string(i);
    for (int v = 0; v < og.g.nv; ++v)
      for (size_t i = 0; i < og.vertex_order[v].size(); ++i)
        if (og.vertex_order[v][i] == f)
          return "v" + std::to_string(v) + "." + std::to_string(i);
    return std::string("?");
  };
  std::vector<std::string> toks;
  for (int e = 0; e < dg.g.ne(); ++e)
    toks.push_back(flag_token(dg.g.edges[e][dg.orientation[e]]) + ">" +
                   flag_token(dg.g.edges[e][1 - dg.orientation[e]]));
  std::sort(toks.begin(), toks.end());
  std::ostringstream os;
  os << canonical_form(og) << "|or:";
  for (auto& t : toks) os << t << ',';
  return os.str();
}

// ---------- enumeration ----------

std::vector<Graph> enumerate_graphs(int max_flags) {
  // Edge kinds on k vertices: vertex pair (i<=j), pendant (i,free),
  // free-living edge, free-living loop. Flags consumed: 2 / 2 / 2 / 1.
  std::vector<Graph> out;
  std::set<std::string> seen;
  int max_vert = max_flags;  // each non-isolated vertex holds >= 1 flag
  for (int k = 0; k <= max_vert + 1; ++k) {
    // allow at most one isolated vertex beyond those carrying flags
    struct Kind {
      int a, b;  // endpoints: >=0 vertex, -1 free; (-2,-2) = loop
    };
    std::vector<Kind> kinds;
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) kinds.push_back({i, j});
    for (int i = 0; i < k; ++i) kinds.push_back({i, -1});
    kinds.push_back({-1, -1});
    kinds.push_back({-2, -2});
    // choose a multiset of edges with total flags <= max_flags
    std::vector<int> count(kinds.size(), 0);
    std::function<void(int, int)> rec = [&](int idx, int flags_left) {
      if (idx == (int)kinds.size()) {
        RawGraph raw;
        raw.nv = k;
        std::vector<int> vdeg(k, 0);
        auto add_flag = [&](int v) {
          raw.flag_vertex.push_back(v);
          return (int)raw.flag_vertex.size() - 1;
        };
        for (size_t kk = 0; kk < kinds.size(); ++kk)
          for (int c = 0; c < count[kk]; ++c) {
            auto& kind = kinds[kk];
            if (kind.a == -2) {
              int f = add_flag(-1);
              raw.edge_flags.push_back({f, f});
            } else {
              int f1 = add_flag(kind.a >= 0 ? kind.a : -1);
              int f2 = add_flag(kind.b >= 0 ? kind.b : -1);
              raw.edge_flags.push_back({f1, f2});
              if (kind.a >= 0) vdeg[kind.a]++;
              if (kind.b >= 0) vdeg[kind.b]++;
            }
          }
        raw.nf = (int)raw.flag_vertex.size();
        // skip graphs with >1 isolated vertex (infinite otherwise)
        int iso_count = 0;
        for (int v = 0; v < k; ++v) {
          bool has = false;
          for (int f = 0; f < raw.nf; ++f)
            if (raw.flag_vertex[f] == v) has = true;
          if (!has) ++iso_count;
        }
        if (iso_count > 1) return;
        Graph g = make_graph(raw);
        auto key = canonical_form(g);
        if (seen.insert(key).second) out.push_back(g);
        return;
      }
      for (int c = 0;; ++c) {
        int fl = kinds[idx].a == -2 ? 1 : 2;
        if (flags_left - c * fl < 0) break;
        count[idx] = c;
        rec(idx + 1, flags_left - c * fl);
      }
      count[idx] = 0;
    };
    rec(0, max_flags);
  }
  return out;
}

std::vector<OrderedGraph> ordered_structures(const Graph& g) {
  std::vector<OrderedGraph> out;
  std::set<std::string> seen;
  auto ff = g.free_flags();
  std::vector<std::vector<int>> vfl(g.nv);
  for (int v = 0; v < g.nv; ++v) vfl[v] = g.vertex_flags(v);
  std::vector<int> fo = ff;
  std::sort(fo.begin(), fo.end());
  auto run = [&](const std::vector<int>& forder) {
    std::vector<std::vector<int>> vo(g.nv);
    std::function<void(int)> rec = [&](int v) {
      if (v == g.nv) {
        OrderedGraph og{g, forder, vo};
        auto key = canonical_form(og);
        if (seen.insert(key).second) out.push_back(og);
        return;
      }
      std::vector<int> p = vfl[v];
      std::sort(p.begin(), p.end());
      if (p.empty()) {
        vo[v] = {};
        rec(v + 1);
        return;
      }
      do {
        vo[v] = p;
        rec(v + 1);
      } while (std::next_permutation(p.begin(), p.end()));
    };
    rec(0);
  };
  if (fo.empty()) run(fo);
  else
    do {
      run(fo);
    } while (std::next_permutation(fo.begin(), fo.end()));
  return out;
}

std::string graph_to_dot(const Graph& g) {
  std::ostringstream os;
  os << "graph G {\n";
  for (int v = 0; v < g.nv; ++v) os << "  v" << v << " [shape=circle];\n";
  int half = 0;
  for (int e = 0; e < g.ne(); ++e) {
    int f1 = g.edges[e][0], f2 = g.edges[e][1];
    auto endp = [&](int f) -> std::string {
      int v = g.flag_vertex[f];
      if (v >= 0) return "v" + std::to_string(v);
      std::string h = "h" + std::to_string(half++);
      os << "  " << h << " [shape=none,label=\"\"];\n";
      return h;
    };
    std::string a = endp(f1);
    std::string b = f1 == f2 ? a : endp(f2);
    os << "  " << a << " -- " << b << " [label=\"e" << e << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace polymnd
