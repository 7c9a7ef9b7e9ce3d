#include "hnc/hierarchy.hpp"

#include <algorithm>
#include <cctype>

namespace hnc {

namespace {

bool canonical_less(const Cluster& a, const Cluster& b) {
  if (a.count() != b.count()) return a.count() < b.count();
  return a < b;
}

}  // namespace

BinaryHierarchy BinaryHierarchy::from_cluster_family(
    int n, std::vector<Cluster> family) {
  if (n < 2) throw DomainError("a binary hierarchy needs at least two leaves");
  const Cluster root = Cluster::full(n);
  for (int i = 0; i < n; ++i) family.push_back(Cluster::single(i));
  family.push_back(root);
  std::sort(family.begin(), family.end(), canonical_less);
  family.erase(std::unique(family.begin(), family.end()), family.end());

  if (int(family.size()) != 2 * n - 1)
    throw DomainError("cluster family has " + std::to_string(family.size()) +
                      " distinct clusters, expected " +
                      std::to_string(2 * n - 1));
  for (const Cluster& c : family) {
    if (c.empty() || !c.subset_of(root))
      throw DomainError("cluster " + c.to_string() +
                        " is not a nonempty subset of the label set");
  }

  BinaryHierarchy t;
  t.n_ = n;
  t.nodes_.resize(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    t.nodes_[i].cluster = family[i];
    auto labels = family[i].labels();
    t.nodes_[i].members.assign(labels.begin(), labels.end());
  }
  t.finalize();
  return t;
}

void BinaryHierarchy::finalize() {
  cluster_list_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    cluster_list_[i] = nodes_[i].cluster;
  root_ = int(nodes_.size()) - 1;

  // In a laminar family the strict supersets of a cluster form a chain, so
  // the first superset in (count, bitset) order is the parent.
  for (int i = 0; i + 1 < int(nodes_.size()); ++i) {
    int parent = -1;
    for (int j = i + 1; j < int(nodes_.size()); ++j) {
      if (nodes_[i].cluster.count() < nodes_[j].cluster.count() &&
          nodes_[i].cluster.subset_of(nodes_[j].cluster)) {
        parent = j;
        break;
      }
    }
    if (parent < 0)
      throw DomainError("cluster " + nodes_[i].cluster.to_string() +
                        " has no parent in the family");
    nodes_[i].parent = parent;
    int& slot_l = nodes_[parent].left;
    int& slot_r = nodes_[parent].right;
    if (slot_l < 0)
      slot_l = i;
    else if (slot_r < 0)
      slot_r = i;
    else
      throw DomainError("cluster " + nodes_[parent].cluster.to_string() +
                        " has more than two children");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    Node& nd = nodes_[i];
    if (nd.cluster.count() == 1) {
      if (nd.left >= 0)
        throw DomainError("singleton cluster with children");
      continue;
    }
    if (nd.left < 0 || nd.right < 0)
      throw DomainError("cluster " + nd.cluster.to_string() +
                        " does not have two children");
    const Cluster& l = nodes_[nd.left].cluster;
    const Cluster& r = nodes_[nd.right].cluster;
    if (!l.disjoint(r) || (l | r) != nd.cluster)
      throw DomainError("children of " + nd.cluster.to_string() +
                        " do not partition it");
    if (l.lowest() > r.lowest()) std::swap(nd.left, nd.right);
  }

  postorder_.clear();
  postorder_.reserve(nodes_.size());
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [node, expanded] = stack.back();
    stack.pop_back();
    if (expanded || is_leaf(node)) {
      postorder_.push_back(node);
    } else {
      stack.push_back({node, true});
      stack.push_back({nodes_[node].right, false});
      stack.push_back({nodes_[node].left, false});
    }
  }
}

int BinaryHierarchy::node_of(const Cluster& c) const {
  auto it = std::lower_bound(cluster_list_.begin(), cluster_list_.end(), c,
                             canonical_less);
  if (it == cluster_list_.end() || *it != c) return -1;
  return int(it - cluster_list_.begin());
}

int BinaryHierarchy::sibling_node(int node) const {
  int p = nodes_[node].parent;
  if (p < 0) throw DomainError("root has no sibling");
  return nodes_[p].left == node ? nodes_[p].right : nodes_[p].left;
}

namespace {
[[noreturn]] void not_a_cluster(const Cluster& c) {
  throw DomainError("not a cluster of the tree: " + c.to_string());
}
}  // namespace

Cluster BinaryHierarchy::parent(const Cluster& c) const {
  int node = node_of(c);
  if (node < 0) not_a_cluster(c);
  int p = nodes_[node].parent;
  if (p < 0) throw DomainError("root has no parent");
  return nodes_[p].cluster;
}

std::vector<Cluster> BinaryHierarchy::children(const Cluster& c) const {
  int node = node_of(c);
  if (node < 0) not_a_cluster(c);
  if (is_leaf(node)) return {};
  return {nodes_[nodes_[node].left].cluster,
          nodes_[nodes_[node].right].cluster};
}

Cluster BinaryHierarchy::sibling(const Cluster& c) const {
  int node = node_of(c);
  if (node < 0) not_a_cluster(c);
  if (nodes_[node].parent < 0)
    throw DomainError("root has no local complement");
  return nodes_[sibling_node(node)].cluster;
}

std::vector<Cluster> BinaryHierarchy::ancestors(const Cluster& c) const {
  int node = node_of(c);
  if (node < 0) not_a_cluster(c);
  std::vector<Cluster> out;
  for (int p = nodes_[node].parent; p >= 0; p = nodes_[p].parent)
    out.push_back(nodes_[p].cluster);
  return out;
}

std::vector<Cluster> BinaryHierarchy::descendants(const Cluster& c) const {
  int node = node_of(c);
  if (node < 0) not_a_cluster(c);
  std::vector<Cluster> out;
  std::vector<int> stack;
  if (!is_leaf(node)) {
    stack.push_back(nodes_[node].left);
    stack.push_back(nodes_[node].right);
  }
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(nodes_[v].cluster);
    if (!is_leaf(v)) {
      stack.push_back(nodes_[v].left);
      stack.push_back(nodes_[v].right);
    }
  }
  return out;
}

// ---- Newick ----

namespace {

struct NewickParser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(unsigned(text[pos]))) ++pos;
  }

  char peek() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("newick: unexpected end of input");
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("newick: expected '") + c + "' at offset " +
                       std::to_string(pos));
    ++pos;
  }

  // Returns the cluster of the parsed node; appends interior clusters.
  Cluster node(std::vector<Cluster>& interior, int& max_label) {
    if (peek() == '(') {
      ++pos;
      Cluster l = node(interior, max_label);
      expect(',');
      Cluster r = node(interior, max_label);
      expect(')');
      if (!l.disjoint(r))
        throw ParseError("newick: duplicate leaf label");
      Cluster u = l | r;
      interior.push_back(u);
      return u;
    }
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && std::isdigit(unsigned(text[pos]))) ++pos;
    if (pos == start)
      throw ParseError("newick: expected integer leaf at offset " +
                       std::to_string(pos));
    long v = std::stol(std::string(text.substr(start, pos - start)));
    if (v < 1 || v > Cluster::kMaxLabels)
      throw ParseError("newick: leaf label out of range: " +
                       std::to_string(v));
    if (int(v) > max_label) max_label = int(v);
    return Cluster::single(int(v - 1));
  }
};

void print_node(const BinaryHierarchy& t, int node, std::string& out) {
  if (t.is_leaf(node)) {
    out += std::to_string(t.cluster(node).lowest() + 1);
    return;
  }
  out += '(';
  print_node(t, t.left(node), out);
  out += ',';
  print_node(t, t.right(node), out);
  out += ')';
}

}  // namespace

BinaryHierarchy BinaryHierarchy::parse_newick(std::string_view text) {
  NewickParser p{text};
  std::vector<Cluster> interior;
  int max_label = 0;
  Cluster top = p.node(interior, max_label);
  p.expect(';');
  p.skip_ws();
  if (p.pos != text.size())
    throw ParseError("newick: trailing characters after ';'");
  if (top != Cluster::full(max_label))
    throw ParseError("newick: leaves must be exactly 1.." +
                     std::to_string(max_label));
  if (max_label < 2) throw ParseError("newick: need at least two leaves");
  interior.pop_back();  // root re-added by the builder
  return from_cluster_family(max_label, std::move(interior));
}

std::string BinaryHierarchy::newick() const {
  std::string out;
  print_node(*this, root_, out);
  out += ';';
  return out;
}

}  // namespace hnc
