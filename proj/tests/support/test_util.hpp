#pragma once

// Shared test-only machinery: independent oracles (exhaustive tree
// enumeration, brute-force 2-means) and configuration generators. Nothing
// here may call the code paths it is used to check.

#include <cmath>
#include <random>
#include <vector>

#include "hnc/cluster.hpp"
#include "hnc/configuration.hpp"
#include "hnc/hierarchy.hpp"

namespace hnc::testing {

// Every rooted binary hierarchy over {0..n-1}, built by recursive bipartition
// (the lowest label stays on the first block to avoid duplicates).
inline void enumerate_splits(const std::vector<int>& labels,
                             std::vector<Cluster>& partial,
                             std::vector<std::vector<Cluster>>& out) {
  if (labels.size() == 1) {
    out.push_back(partial);
    return;
  }
  const int m = int(labels.size());
  // Nonempty proper subsets containing labels[0].
  for (int mask = 0; mask < (1 << (m - 1)); ++mask) {
    std::vector<int> left{labels[0]}, right;
    for (int k = 1; k < m; ++k)
      ((mask >> (k - 1)) & 1 ? left : right).push_back(labels[k]);
    if (right.empty()) continue;
    Cluster cl, cr;
    for (int l : left) cl.add(l);
    for (int r : right) cr.add(r);
    std::size_t mark = partial.size();
    if (left.size() > 1) partial.push_back(cl);
    if (right.size() > 1) partial.push_back(cr);
    // Enumerate sub-resolutions of both sides jointly.
    std::vector<std::vector<Cluster>> lefts;
    {
      std::vector<Cluster> tmp;
      enumerate_splits(left, tmp, lefts);
    }
    std::vector<std::vector<Cluster>> rights;
    {
      std::vector<Cluster> tmp;
      enumerate_splits(right, tmp, rights);
    }
    for (const auto& lf : lefts) {
      for (const auto& rf : rights) {
        std::vector<Cluster> fam = partial;
        fam.insert(fam.end(), lf.begin(), lf.end());
        fam.insert(fam.end(), rf.begin(), rf.end());
        out.push_back(std::move(fam));
      }
    }
    partial.resize(mark);
  }
}

inline std::vector<BinaryHierarchy> all_trees(int n) {
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  std::vector<Cluster> partial;
  std::vector<std::vector<Cluster>> families;
  enumerate_splits(labels, partial, families);
  std::vector<BinaryHierarchy> out;
  out.reserve(families.size());
  for (auto& f : families)
    out.push_back(BinaryHierarchy::from_cluster_family(n, std::move(f)));
  return out;
}

// Brute-force 2-means oracle: all bipartitions, minimum within-cluster sum
// of squared distances to block centroids.
inline double split_cost(const Configuration& c, const std::vector<int>& a,
                         const std::vector<int>& b) {
  double cost = 0.0;
  for (const auto* blk : {&a, &b}) {
    std::vector<double> cen(c.dim(), 0.0);
    for (int i : *blk) {
      auto x = c.pos(i);
      for (int k = 0; k < c.dim(); ++k) cen[k] += x[k];
    }
    for (int k = 0; k < c.dim(); ++k) cen[k] /= double(blk->size());
    for (int i : *blk) {
      auto x = c.pos(i);
      for (int k = 0; k < c.dim(); ++k)
        cost += (x[k] - cen[k]) * (x[k] - cen[k]);
    }
  }
  return cost;
}

inline std::vector<std::pair<Cluster, Cluster>> optimal_bipartitions(
    const Configuration& c, double tie_tol = 1e-12) {
  const int n = c.count();
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = i;
  double best = HUGE_VAL;
  std::vector<std::pair<Cluster, Cluster>> out;
  for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
    std::vector<int> a{0}, b;
    for (int k = 1; k < n; ++k) ((mask >> (k - 1)) & 1 ? a : b).push_back(k);
    if (b.empty()) continue;
    double cost = split_cost(c, a, b);
    if (cost < best - tie_tol) {
      best = cost;
      out.clear();
    }
    if (cost <= best + tie_tol) {
      Cluster ca, cb;
      for (int i : a) ca.add(i);
      for (int i : b) cb.add(i);
      out.push_back({ca, cb});
      best = std::min(best, cost);
    }
  }
  return out;
}

// Random valid configuration: uniform positions, small radii, resampled
// until all strict separations hold.
inline Configuration random_config(std::mt19937_64& rng, int n, int d,
                                   double box = 10.0, double rmax = 0.3) {
  std::uniform_real_distribution<double> upos(0.0, box);
  std::uniform_real_distribution<double> urad(0.05, rmax);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> pos(std::size_t(n) * d), rad(n);
    for (auto& v : pos) v = upos(rng);
    for (auto& r : rad) r = urad(rng);
    Configuration c(d, std::move(pos), std::move(rad));
    if (validate(c).empty()) return c;
  }
  throw std::runtime_error("random_config: sampling failed");
}

// Recursive standard-configuration layout supporting a given tree. Split
// gaps are sized bottom-up from the subtree content so every local split is
// narrow by a wide margin regardless of depth; directions are random and the
// parent centroid stays fixed.
struct LayoutPlan {
  std::vector<double> reach;  // max leaf distance from the node centroid + r
  std::vector<double> gap;    // centroid gap of the node's split
};

inline LayoutPlan layout_plan(const BinaryHierarchy& tree, double radius) {
  LayoutPlan plan;
  plan.reach.assign(tree.node_count(), radius);
  plan.gap.assign(tree.node_count(), 0.0);
  for (int node : tree.postorder()) {
    if (tree.is_leaf(node)) continue;
    int l = tree.left(node), r = tree.right(node);
    double wl = tree.member_count(l), wr = tree.member_count(r);
    double wtot = wl + wr;
    double g = 3.0 * (plan.reach[l] + plan.reach[r]) + 4.0 * radius + 0.5;
    plan.gap[node] = g;
    plan.reach[node] = std::max((wr / wtot) * g + plan.reach[l],
                                (wl / wtot) * g + plan.reach[r]);
  }
  return plan;
}

inline void layout_rec(const BinaryHierarchy& tree, const LayoutPlan& plan,
                       int node, const std::vector<double>& center,
                       std::mt19937_64& rng, std::vector<double>& pos, int d) {
  if (tree.is_leaf(node)) {
    int label = tree.members(node)[0];
    for (int k = 0; k < d; ++k) pos[std::size_t(label) * d + k] = center[k];
    return;
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> dir(d);
  double nrm = 0.0;
  while (nrm < 1e-6) {
    nrm = 0.0;
    for (int k = 0; k < d; ++k) {
      dir[k] = gauss(rng);
      nrm += dir[k] * dir[k];
    }
    nrm = std::sqrt(nrm);
  }
  for (int k = 0; k < d; ++k) dir[k] /= nrm;
  int l = tree.left(node), r = tree.right(node);
  double wl = tree.member_count(l), wr = tree.member_count(r);
  double wtot = wl + wr;
  std::vector<double> cl(d), cr(d);
  for (int k = 0; k < d; ++k) {
    cl[k] = center[k] + (wr / wtot) * plan.gap[node] * dir[k];
    cr[k] = center[k] - (wl / wtot) * plan.gap[node] * dir[k];
  }
  layout_rec(tree, plan, l, cl, rng, pos, d);
  layout_rec(tree, plan, r, cr, rng, pos, d);
}

inline Configuration standard_config_for(const BinaryHierarchy& tree, int d,
                                         std::mt19937_64& rng,
                                         double radius = 0.1) {
  const int n = tree.leaf_count();
  std::vector<double> pos(std::size_t(n) * d, 0.0);
  std::vector<double> center(d, 0.0);
  LayoutPlan plan = layout_plan(tree, radius);
  layout_rec(tree, plan, tree.root_node(), center, rng, pos, d);
  return Configuration(d, std::move(pos), std::vector<double>(n, radius));
}

}  // namespace hnc::testing
