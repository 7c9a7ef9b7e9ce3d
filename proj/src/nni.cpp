#include "hnc/nni.hpp"

#include <algorithm>
#include <limits>

namespace hnc {

BinaryHierarchy nni_move(const BinaryHierarchy& tree, const Cluster& g) {
  if (g.empty()) return tree;  // identity move
  int node = tree.node_of(g);
  if (node < 0)
    throw DomainError("nni_move: not a cluster of the tree: " + g.to_string());
  int p = tree.parent_node(node);
  if (p < 0 || tree.parent_node(p) < 0)
    throw DomainError("nni_move: cluster has no grandparent: " + g.to_string());
  int gp = tree.parent_node(p);
  std::vector<Cluster> family;
  family.reserve(tree.node_count());
  for (const Cluster& c : tree.clusters()) {
    if (c == tree.cluster(p)) continue;
    if (c.count() > 1 && c.count() < tree.leaf_count()) family.push_back(c);
  }
  family.push_back(tree.cluster(gp) - g);
  return BinaryHierarchy::from_cluster_family(tree.leaf_count(),
                                              std::move(family));
}

namespace {

void require_same_leaves(const BinaryHierarchy& s, const BinaryHierarchy& t) {
  if (s.leaf_count() != t.leaf_count())
    throw DomainError("trees are over different label sets");
}

// Returns the triplet when (s, t) is NNI-adjacent.
bool triplet_of(const BinaryHierarchy& s, const BinaryHierarchy& t,
                NniTriplet* out) {
  require_same_leaves(s, t);
  std::vector<Cluster> only_s, only_t;
  for (const Cluster& c : s.clusters())
    if (!t.has_cluster(c)) only_s.push_back(c);
  for (const Cluster& c : t.clusters())
    if (!s.has_cluster(c)) only_t.push_back(c);
  if (only_s.size() != 1 || only_t.size() != 1) return false;
  const Cluster ab = only_s[0], bc = only_t[0];
  const Cluster b = ab & bc;
  const Cluster a = ab - bc;
  const Cluster c = bc - ab;
  if (a.empty() || b.empty() || c.empty()) return false;
  // The defining move swaps a with its parent's sibling c in s.
  int na = s.node_of(a);
  if (na < 0) return false;
  int pa = s.parent_node(na);
  if (pa < 0 || s.parent_node(pa) < 0) return false;
  if (nni_move(s, a) != t) return false;
  if (out) *out = {a, b, c};
  return true;
}

}  // namespace

bool nni_adjacent(const BinaryHierarchy& s, const BinaryHierarchy& t) {
  return triplet_of(s, t, nullptr);
}

NniTriplet nni_triplet(const BinaryHierarchy& s, const BinaryHierarchy& t) {
  NniTriplet trip;
  if (!triplet_of(s, t, &trip))
    throw DomainError("nni_triplet: trees are not NNI-adjacent");
  return trip;
}

unsigned __int128 count_trees(int n) {
  if (n < 2) throw DomainError("count_trees requires n >= 2");
  constexpr unsigned __int128 kMax = ~(unsigned __int128)0;
  unsigned __int128 r = 1;
  for (int k = 3; k <= 2 * n - 3; k += 2) {
    if (r > kMax / (unsigned)k)
      throw DomainError("count_trees: value exceeds 128-bit range");
    r *= (unsigned)k;
  }
  return r;
}

std::string uint128_to_string(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s += char('0' + int(v % 10));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Cluster nni_control(const BinaryHierarchy& current,
                    const BinaryHierarchy& goal) {
  require_same_leaves(current, goal);
  if (current == goal) return {};

  // 2a: common cluster with differing children; minimal cardinality, then
  // smallest member label.
  int best_k = -1;
  for (const Cluster& c : current.clusters()) {
    if (c.count() < 2 || !goal.has_cluster(c)) continue;
    auto ch_c = current.children(c);
    auto ch_g = goal.children(c);
    if (ch_c == ch_g) continue;
    if (best_k < 0) {
      best_k = current.node_of(c);
      continue;
    }
    const Cluster& b = current.cluster(best_k);
    if (c.count() < b.count() ||
        (c.count() == b.count() && c.lowest() < b.lowest()))
      best_k = current.node_of(c);
  }
  if (best_k < 0)
    throw InternalError("nni_control: no common cluster with differing "
                        "children although trees differ");
  const Cluster k_cluster = current.cluster(best_k);
  auto kids = goal.children(k_cluster);  // lowest-label-first
  const Cluster k_left = kids[0], k_right = kids[1];

  // 2b: nonsingleton I in the current tree whose children split across
  // (K_L, K_R); minimal cardinality, then smallest member label.
  int best_i = -1;
  Cluster i_left, i_right;
  for (const Cluster& c : current.clusters()) {
    if (c.count() < 2 || !c.subset_of(k_cluster)) continue;
    auto ch = current.children(c);
    Cluster il, ir;
    if (ch[0].subset_of(k_left) && ch[1].subset_of(k_right)) {
      il = ch[0];
      ir = ch[1];
    } else if (ch[0].subset_of(k_right) && ch[1].subset_of(k_left)) {
      il = ch[1];
      ir = ch[0];
    } else {
      continue;
    }
    if (best_i >= 0) {
      const Cluster& b = current.cluster(best_i);
      if (!(c.count() < b.count() ||
            (c.count() == b.count() && c.lowest() < b.lowest())))
        continue;
    }
    best_i = current.node_of(c);
    i_left = il;
    i_right = ir;
  }
  if (best_i < 0)
    throw InternalError("nni_control: no crossing cluster found below " +
                        k_cluster.to_string());

  // 2c: pick the grandchild by the position of I's sibling.
  const Cluster sib = current.sibling(current.cluster(best_i));
  if (sib.subset_of(k_left)) return i_right;
  if (sib.subset_of(k_right)) return i_left;
  return i_left;
}

std::vector<BinaryHierarchy> nni_navigate(const BinaryHierarchy& from,
                                          const BinaryHierarchy& to) {
  require_same_leaves(from, to);
  const long bound = nni_path_bound(from.leaf_count());
  std::vector<BinaryHierarchy> path{from};
  while (!(path.back() == to)) {
    if (long(path.size()) - 1 >= bound)
      throw InternalError(
          "nni_navigate: exceeded the (n-1)(n-2)/2 move bound");
    Cluster g = nni_control(path.back(), to);
    path.push_back(nni_move(path.back(), g));
  }
  return path;
}

}  // namespace hnc
