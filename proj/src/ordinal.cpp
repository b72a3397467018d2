#include "polymnd/ordinal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace polymnd {

NOrdinal NOrdinal::from_levels(int n, const std::vector<int>& levels) {
  // k-1 adjacent levels give the interval-min table on {0..k-1}
  int k = (int)levels.size() + 1;
  NOrdinal o;
  o.n = n;
  o.rel.assign(k, std::vector<int>(k, -1));
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      int m = levels[a];
      for (int i = a + 1; i < b; ++i) m = std::min(m, levels[i]);
      o.rel[a][b] = m;
    }
  return o;
}

NOrdinal NOrdinal::initial(int n) {
  NOrdinal o;
  o.n = n;
  return o;
}

NOrdinal NOrdinal::singleton(int n) {
  NOrdinal o;
  o.n = n;
  o.rel.assign(1, std::vector<int>(1, -1));
  return o;
}

int NOrdinal::dimension() const {
  // pruned level-tree: nodes at depth d, d = 0..n; edge count = total nodes
  // minus 1. Nodes at depth d correspond to interval classes where adjacent
  // elements with level >= d stay together.
  int k = size();
  if (k == 0) return -(n - 1);  // degenerate tree: root only, 0 edges
  int edges = 0;
  for (int d = 1; d <= n; ++d) {
    // number of depth-d nodes: blocks of the partition by "levels >= d"
    int blocks = 1;
    for (int i = 0; i + 1 < k; ++i) {
      // adjacent in total order: level between consecutive elements
      // (valid canonical ordinals only)
      int lv = -1;
      // find the pair in total order
      // assume canonical: i <_? i+1
      lv = rel[i][i + 1] >= 0 ? rel[i][i + 1] : rel[i + 1][i];
      if (lv < d) ++blocks;  // wait: same depth-d node iff meet level >= d
    }
    edges += blocks;
  }
  return edges - (n - 1);
}

std::string NOrdinal::key() const {
  std::ostringstream os;
  os << "O" << n << ":" << size() << ":";
  for (int a = 0; a < size(); ++a)
    for (int b = 0; b < size(); ++b)
      if (rel[a][b] >= 0) os << a << "<" << b << "@" << rel[a][b] << ",";
  return os.str();
}

std::vector<OrdinalIssue> validate_ordinal(const NOrdinal& o) {
  std::vector<OrdinalIssue> bad;
  int k = o.size();
  for (int a = 0; a < k; ++a) {
    if ((int)o.rel[a].size() != k) {
      bad.push_back({"relation table not square"});
      return bad;
    }
    if (o.rel[a][a] >= 0) bad.push_back({"antireflexivity fails at " + std::to_string(a)});
  }
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      bool ab = o.rel[a][b] >= 0, ba = o.rel[b][a] >= 0;
      if (ab == ba)
        bad.push_back({"complementarity fails on pair (" + std::to_string(a) + "," +
                       std::to_string(b) + ")"});
      int lv = ab ? o.rel[a][b] : o.rel[b][a];
      if ((ab || ba) && (lv < 0 || lv >= o.n))
        bad.push_back({"level out of range on pair (" + std::to_string(a) + "," +
                       std::to_string(b) + ")"});
    }
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      for (int c = 0; c < k; ++c) {
        if (a == b || b == c || a == c) continue;
        if (o.rel[a][b] >= 0 && o.rel[b][c] >= 0) {
          int want = std::min(o.rel[a][b], o.rel[b][c]);
          if (o.rel[a][c] != want)
            bad.push_back({"transitivity fails on (" + std::to_string(a) + "," +
                           std::to_string(b) + "," + std::to_string(c) + ")"});
        }
      }
  return bad;
}

std::vector<int> total_order(const NOrdinal& o) {
  std::vector<int> p(o.size());
  std::iota(p.begin(), p.end(), 0);
  std::sort(p.begin(), p.end(), [&](int a, int b) { return o.less(a, b); });
  return p;
}

NOrdinal canonicalize(const NOrdinal& o, std::vector<int>* perm_out) {
  auto p = total_order(o);  // p[i] = element at position i
  NOrdinal c;
  c.n = o.n;
  int k = o.size();
  c.rel.assign(k, std::vector<int>(k, -1));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      if (o.rel[p[i]][p[j]] >= 0) c.rel[i][j] = o.rel[p[i]][p[j]];
  if (perm_out) *perm_out = p;
  return c;
}

MapClass classify_map(const NOrdinal& src, const NOrdinal& dst, const std::vector<int>& f) {
  MapClass mc;
  if ((int)f.size() != src.size()) {
    mc.violation = "underlying function has wrong domain";
    return mc;
  }
  for (int a : f)
    if (a < 0 || a >= dst.size()) {
      mc.violation = "underlying function has wrong codomain";
      return mc;
    }
  mc.is_map = true;
  mc.order_preserving = true;
  for (int a = 0; a < src.size(); ++a)
    for (int b = 0; b < src.size(); ++b) {
      if (src.rel[a][b] < 0) continue;
      int p = src.rel[a][b];
      int fa = f[a], fb = f[b];
      if (fa == fb) continue;  // case (2)
      if (dst.rel[fa][fb] >= 0 && dst.rel[fa][fb] >= p) continue;  // case (1)
      if (dst.rel[fb][fa] >= 0 && dst.rel[fb][fa] > p) {           // case (3)
        mc.order_preserving = false;
        continue;
      }
      mc.is_map = false;
      mc.order_preserving = false;
      mc.violation = "pair (" + std::to_string(a) + "," + std::to_string(b) +
                     ") at level " + std::to_string(p) + " maps to no allowed case";
      return mc;
    }
  std::set<int> img(f.begin(), f.end());
  mc.surjective = (int)img.size() == dst.size();
  mc.quasibijection = mc.surjective && (int)f.size() == dst.size();
  return mc;
}

std::vector<Fiber> fibers(const NOrdinal& src, const NOrdinal& dst,
                          const std::vector<int>& f) {
  std::vector<Fiber> out;
  auto order = total_order(dst);
  auto sorder = total_order(src);
  for (int pos = 0; pos < dst.size(); ++pos) {
    int i = order[pos];
    Fiber fb;
    for (int a : sorder)
      if (f[a] == i) fb.elements.push_back(a);
    int m = (int)fb.elements.size();
    NOrdinal ind;
    ind.n = src.n;
    ind.rel.assign(m, std::vector<int>(m, -1));
    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y)
        ind.rel[x][y] = src.rel[fb.elements[x]][fb.elements[y]];
    fb.ordinal = canonicalize(ind);
    out.push_back(std::move(fb));
  }
  return out;
}

bool dominates(const NOrdinal& S, const NOrdinal& X) {
  if (S.size() != X.size() || S.n != X.n)
    throw std::invalid_argument("dominates: carrier mismatch");
  std::vector<int> id(S.size());
  std::iota(id.begin(), id.end(), 0);
  return classify_map(S, X, id).is_map;
}

NOrdinal suspend(const NOrdinal& T, int k) {
  if (k < 0) throw std::invalid_argument("suspend: negative shift");
  NOrdinal o = T;
  o.n = T.n + k;
  for (auto& row : o.rel)
    for (auto& x : row)
      if (x >= 0) x += k;
  return o;
}

std::vector<NOrdinal> all_canonical_ordinals(int n, int k) {
  std::vector<NOrdinal> out;
  if (k == 0) {
    out.push_back(NOrdinal::initial(n));
    return out;
  }
  std::vector<int> levels(k - 1, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k - 1) {
      out.push_back(NOrdinal::from_levels(n, levels));
      return;
    }
    for (int l = 0; l < n; ++l) {
      levels[i] = l;
      rec(i + 1);
    }
  };
  if (n == 0 && k > 1) return out;  // no 0-ordinals with >= 2 elements... n=0: single relation set empty
  rec(0);
  return out;
}

std::vector<NOrdinal> all_ordinals(int n, int k) {
  // arbitrary total order: permute the canonical ones
  std::vector<NOrdinal> out;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  for (auto& c : all_canonical_ordinals(n, k)) {
    std::vector<int> p = perm;
    do {
      NOrdinal o;
      o.n = n;
      o.rel.assign(k, std::vector<int>(k, -1));
      // element p[i] sits at position i of the canonical order
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          if (c.rel[i][j] >= 0) o.rel[p[i]][p[j]] = c.rel[i][j];
      out.push_back(o);
    } while (std::next_permutation(p.begin(), p.end()));
  }
  // dedupe (identical tables can arise only if k small; keep unique)
  std::set<std::string> seen;
  std::vector<NOrdinal> uniq;
  for (auto& o : out)
    if (seen.insert(o.key()).second) uniq.push_back(o);
  return uniq;
}

// ---------- n-planar trees ----------

int NPlanarNode::count_leaves() const {
  if (leaf) return 1;
  int s = 0;
  for (auto& c : children) s += c.count_leaves();
  return s;
}

int NPlanarNode::count_vertices() const {
  if (leaf) return 0;
  int s = 1;
  for (auto& c : children) s += c.count_vertices();
  return s;
}

int NPlanarNode::count_edges() const {
  // one edge below this node; leaves contribute their edge only
  if (leaf) return 1;
  int s = 1;
  for (auto& c : children) s += c.count_edges();
  return s;
}

std::string NPlanarTree::key() const {
  std::ostringstream os;
  std::function<void(const NPlanarNode&)> enc = [&](const NPlanarNode& nd) {
    if (nd.leaf) {
      os << "l" << nd.label;
      return;
    }
    os << "v[" << nd.ord.key() << "](";
    for (auto& c : nd.children) enc(c);
    os << ")";
  };
  os << "T" << n << ":";
  enc(root);
  os << "|S:" << leaf_ordinal.key();
  return os.str();
}

std::vector<const NPlanarNode*> tree_vertices(const NPlanarTree& t) {
  std::vector<const NPlanarNode*> out;
  std::function<void(const NPlanarNode&)> rec = [&](const NPlanarNode& nd) {
    if (nd.leaf) return;
    out.push_back(&nd);
    for (auto& c : nd.children) rec(c);
  };
  rec(t.root);
  return out;
}

int tree_dimension(const NPlanarTree& t) {
  int d = 0;
  for (auto* v : tree_vertices(t)) d += v->ord.dimension();
  return d;
}

NOrdinal leaf_order(const NPlanarTree& t) {
  int p = t.leaves();
  NOrdinal L;
  L.n = t.n;
  L.rel.assign(p, std::vector<int>(p, -1));
  // recursive: for each vertex, relations between leaves of distinct children
  // come from the vertex ordinal
  std::function<std::vector<int>(const NPlanarNode&)> rec =
      [&](const NPlanarNode& nd) -> std::vector<int> {
    if (nd.leaf) return {nd.label};
    std::vector<std::vector<int>> under;
    for (auto& c : nd.children) under.push_back(rec(c));
    for (size_t i = 0; i < under.size(); ++i)
      for (size_t j = 0; j < under.size(); ++j) {
        if (i == j) continue;
        int lv = nd.ord.rel[i][j];
        if (lv < 0) continue;
        for (int a : under[i])
          for (int b : under[j]) L.rel[a][b] = lv;
      }
    std::vector<int> all;
    for (auto& u : under) all.insert(all.end(), u.begin(), u.end());
    return all;
  };
  rec(t.root);
  return L;
}

std::vector<OrdinalIssue> validate_nplanar(const NPlanarTree& t) {
  std::vector<OrdinalIssue> bad;
  // vertex ordinals valid, with arity matching children, planar order =
  // total order of the ordinal (children stored in total-order position)
  std::function<void(const NPlanarNode&)> rec = [&](const NPlanarNode& nd) {
    if (nd.leaf) return;
    auto b = validate_ordinal(nd.ord);
    for (auto& x : b) bad.push_back({"vertex ordinal: " + x.what});
    if (nd.ord.size() != (int)nd.children.size())
      bad.push_back({"vertex ordinal size != child count"});
    if (nd.ord.n != t.n) bad.push_back({"vertex ordinal has wrong n"});
    // planar representative: total order of ord = child index order
    auto to = total_order(nd.ord);
    for (int i = 0; i < (int)to.size(); ++i)
      if (to[i] != i) bad.push_back({"children not in ordinal total order"});
    for (auto& c : nd.children) rec(c);
  };
  rec(t.root);
  // labels form 0..p-1
  int p = t.leaves();
  {
    std::vector<int> seen(p, 0);
    std::function<void(const NPlanarNode&)> lab = [&](const NPlanarNode& nd) {
      if (nd.leaf) {
        if (nd.label < 0 || nd.label >= p) bad.push_back({"leaf label out of range"});
        else seen[nd.label]++;
        return;
      }
      for (auto& c : nd.children) lab(c);
    };
    lab(t.root);
    for (int i = 0; i < p; ++i)
      if (seen[i] != 1) bad.push_back({"leaf labels not a bijection"});
  }
  if (t.leaf_ordinal.n != t.n) bad.push_back({"leaf ordinal has wrong n"});
  if (t.leaf_ordinal.size() != p) bad.push_back({"leaf ordinal size != leaf count"});
  {
    auto b = validate_ordinal(t.leaf_ordinal);
    for (auto& x : b) bad.push_back({"leaf ordinal: " + x.what});
  }
  if (bad.empty()) {
    auto L = leaf_order(t);
    if (!dominates(t.leaf_ordinal, L)) bad.push_back({"leaf ordinal does not dominate L(tau)"});
  }
  return bad;
}

NPlanarTree corolla_tree(const NOrdinal& T) {
  NPlanarTree t;
  t.n = T.n;
  NOrdinal c = canonicalize(T);
  t.root.leaf = false;
  t.root.ord = c;
  auto to = total_order(T);
  for (int i = 0; i < T.size(); ++i) {
    NPlanarNode lf;
    lf.leaf = true;
    lf.label = i;  // position i in total order gets label i
    t.root.children.push_back(lf);
  }
  t.leaf_ordinal = c;
  return t;
}

NPlanarTree unit_tree(int n) {
  NPlanarTree t;
  t.n = n;
  t.root.leaf = true;
  t.root.label = 0;
  t.leaf_ordinal = NOrdinal::singleton(n);
  return t;
}

namespace {

// re-sort children of every vertex into the vertex ordinal's total order,
// permuting the ordinal accordingly (produces the planar representative)
void planarize(NPlanarNode& nd) {
  if (nd.leaf) return;
  std::vector<int> p;
  NOrdinal c = canonicalize(nd.ord, &p);
  std::vector<NPlanarNode> ch;
  for (int i = 0; i < (int)p.size(); ++i) ch.push_back(std::move(nd.children[p[i]]));
  nd.ord = std::move(c);
  nd.children = std::move(ch);
  for (auto& c2 : nd.children) planarize(c2);
}

}  // namespace

NPlanarTree insert_nplanar(const NPlanarTree& t, int v, const NPlanarTree& t2) {
  // locate vertex #v in preorder
  auto verts = tree_vertices(t);
  if (v < 0 || v >= (int)verts.size())
    throw std::invalid_argument("insert_nplanar: no such vertex");
  const NOrdinal& tv = verts[v]->ord;
  // rho: position i of t2's leaf ordinal total order <-> input i of tv
  const NOrdinal& S2 = t2.leaf_ordinal;
  if (S2.size() != tv.size())
    throw std::invalid_argument("insert_nplanar: arity mismatch");
  // require ordinal iso along the order-induced bijection
  auto to2 = total_order(S2);  // to2[i] = label at position i
  for (int i = 0; i < S2.size(); ++i)
    for (int j = 0; j < S2.size(); ++j)
      if (S2.rel[to2[i]][to2[j]] != tv.rel[i][j])
        throw std::invalid_argument("insert_nplanar: rho_v is not an ordinal isomorphism");

  NPlanarTree out;
  out.n = t.n;
  out.leaf_ordinal = t.leaf_ordinal;

  // relabel t2 leaves: t2 leaf with label l sits at position pos2[l] of S2's
  // total order, which corresponds to input pos2[l] of v
  std::vector<int> pos2(S2.size());
  for (int i = 0; i < S2.size(); ++i) pos2[to2[i]] = i;

  int counter = 0;
  std::function<NPlanarNode(const NPlanarNode&)> copy_t;
  const NPlanarNode* target = verts[v];

  std::function<NPlanarNode(const NPlanarNode&, const std::vector<NPlanarNode>&)>
      graft = [&](const NPlanarNode& nd2,
                  const std::vector<NPlanarNode>& slot) -> NPlanarNode {
    // replace each leaf of t2 (label l) by slot[pos2[l]]
    if (nd2.leaf) return slot[pos2[nd2.label]];
    NPlanarNode out2;
    out2.leaf = false;
    out2.ord = nd2.ord;
    for (auto& c : nd2.children) out2.children.push_back(graft(c, slot));
    return out2;
  };

  copy_t = [&](const NPlanarNode& nd) -> NPlanarNode {
    if (nd.leaf) return nd;
    if (&nd == target) {
      std::vector<NPlanarNode> slot;
      for (auto& c : nd.children) slot.push_back(copy_t(c));
      return graft(t2.root, slot);
    }
    NPlanarNode out2;
    out2.leaf = false;
    out2.ord = nd.ord;
    for (auto& c : nd.children) out2.children.push_back(copy_t(c));
    return out2;
  };
  (void)counter;
  out.root = copy_t(t.root);
  planarize(out.root);
  return out;
}

NPlanarTree sigma_tree(const NOrdinal& src, const NOrdinal& dst, const std::vector<int>& f,
                       bool normal_variant) {
  auto mc = classify_map(src, dst, f);
  if (!mc.is_map) throw std::invalid_argument("sigma_tree: not a map of ordinals");
  auto fibs = fibers(src, dst, f);
  NPlanarTree t;
  t.n = src.n;
  t.root.leaf = false;
  t.root.ord = canonicalize(dst);
  for (auto& fb : fibs) {
    if (normal_variant && fb.ordinal.size() == 1) {
      NPlanarNode lf;
      lf.leaf = true;
      lf.label = fb.elements[0];
      t.root.children.push_back(lf);
    } else {
      NPlanarNode v;
      v.leaf = false;
      v.ord = fb.ordinal;
      // children of the fiber vertex: leaves labelled by the fiber elements,
      // in the fiber's total order (elements already sorted by src order;
      // canonicalize() used the same order)
      for (int e : fb.elements) {
        NPlanarNode lf;
        lf.leaf = true;
        lf.label = e;
        v.children.push_back(lf);
      }
      t.root.children.push_back(v);
    }
  }
  t.leaf_ordinal = src;
  return t;
}

std::string ordinal_to_json(const NOrdinal& o) {
  nlohmann::json j;
  j["n"] = o.n;
  j["size"] = o.size();
  auto rels = nlohmann::json::array();
  for (int a = 0; a < o.size(); ++a)
    for (int b = 0; b < o.size(); ++b)
      if (o.rel[a][b] >= 0) rels.push_back({a + 1, b + 1, o.rel[a][b]});
  j["rel"] = rels;
  return j.dump();
}

NOrdinal ordinal_from_json(const std::string& s) {
  auto j = nlohmann::json::parse(s);
  NOrdinal o;
  o.n = j.at("n").get<int>();
  int k = j.at("size").get<int>();
  o.rel.assign(k, std::vector<int>(k, -1));
  for (auto& r : j.at("rel")) {
    int a = r[0].get<int>() - 1, b = r[1].get<int>() - 1, p = r[2].get<int>();
    if (a < 0 || a >= k || b < 0 || b >= k)
      throw std::invalid_argument("ordinal json: element out of range");
    o.rel[a][b] = p;
  }
  return o;
}

}  // namespace polymnd
