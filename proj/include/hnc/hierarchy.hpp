#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hnc/cluster.hpp"
#include "hnc/errors.hpp"

namespace hnc {

// Rooted non-degenerate (binary) tree over the label set {0..n-1}, stored as
// its cluster family. Nodes are kept in a canonical order (cardinality, then
// bitset order), so two trees are equal iff their node arrays are equal;
// tree equality is cluster-set equality.
class BinaryHierarchy {
 public:
  // Builds a tree from its cluster family. Singletons and the root may be
  // omitted; every interior cluster must have exactly two children
  // partitioning it.
  static BinaryHierarchy from_cluster_family(int n,
                                             std::vector<Cluster> family);

  // Grammar: tree := node ";" ; node := "(" node "," node ")" | integer,
  // with integer leaves labeled 1..n.
  static BinaryHierarchy parse_newick(std::string_view text);
  std::string newick() const;

  int leaf_count() const { return n_; }
  int node_count() const { return int(nodes_.size()); }  // 2n - 1

  Cluster root() const { return nodes_[root_].cluster; }
  bool has_cluster(const Cluster& c) const { return node_of(c) >= 0; }
  const std::vector<Cluster>& clusters() const { return cluster_list_; }

  // Cluster relations. A missing cluster raises a domain error; so does
  // parent/sibling of the root.
  Cluster parent(const Cluster& c) const;
  std::vector<Cluster> children(const Cluster& c) const;  // empty for leaves
  Cluster sibling(const Cluster& c) const;                // local complement
  std::vector<Cluster> ancestors(const Cluster& c) const;  // parent first
  std::vector<Cluster> descendants(const Cluster& c) const;

  bool operator==(const BinaryHierarchy& o) const {
    return n_ == o.n_ && cluster_list_ == o.cluster_list_;
  }

  // Node-indexed access for hot paths.
  int node_of(const Cluster& c) const;  // -1 when absent
  int root_node() const { return root_; }
  bool is_leaf(int node) const { return nodes_[node].left < 0; }
  int left(int node) const { return nodes_[node].left; }    // lowest-label child
  int right(int node) const { return nodes_[node].right; }
  int parent_node(int node) const { return nodes_[node].parent; }
  int sibling_node(int node) const;
  const Cluster& cluster(int node) const { return nodes_[node].cluster; }
  int member_count(int node) const { return int(nodes_[node].members.size()); }
  const std::vector<std::uint16_t>& members(int node) const {
    return nodes_[node].members;
  }
  // Node indices with children (lowest-label-first) before parents.
  const std::vector<int>& postorder() const { return postorder_; }

 private:
  struct Node {
    Cluster cluster;
    int left = -1;
    int right = -1;
    int parent = -1;
    std::vector<std::uint16_t> members;  // ascending
  };

  BinaryHierarchy() = default;
  void finalize();  // wires parents/children from sorted nodes_

  int n_ = 0;
  int root_ = -1;
  std::vector<Node> nodes_;            // sorted by (count, bitset order)
  std::vector<Cluster> cluster_list_;  // same order as nodes_
  std::vector<int> postorder_;
};

}  // namespace hnc
