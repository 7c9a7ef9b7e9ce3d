#include "hnc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "hnc/kernels.hpp"
#include "hnc/tolerances.hpp"

namespace hnc {

namespace {

double sqdist(const Configuration& c, int i, const std::vector<double>& p) {
  auto x = c.pos(i);
  double acc = 0.0;
  for (int k = 0; k < c.dim(); ++k) acc += (x[k] - p[k]) * (x[k] - p[k]);
  return acc;
}

}  // namespace

std::pair<Cluster, Cluster> two_means_split(const Configuration& config,
                                            const Cluster& members) {
  const auto labels = members.labels();
  const int m = int(labels.size());
  const int d = config.dim();
  if (m < 2) throw DomainError("two_means_split needs at least two points");

  // Seed at the farthest pair; ties keep the lexicographically lowest pair.
  int sa = -1, sb = -1;
  double best = -1.0;
  for (int s = 0; s < m; ++s) {
    auto xs = config.pos(labels[s]);
    for (int t = s + 1; t < m; ++t) {
      auto xt = config.pos(labels[t]);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (xs[k] - xt[k]) * (xs[k] - xt[k]);
      if (acc > best) {
        best = acc;
        sa = labels[s];
        sb = labels[t];
      }
    }
  }
  if (best <= 0.0)
    throw DomainError("two_means_split: points are not distinct");

  std::vector<double> mu1(config.pos(sa).begin(), config.pos(sa).end());
  std::vector<double> mu2(config.pos(sb).begin(), config.pos(sb).end());
  std::vector<int> assign(m, 0);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<int> next(m);
    int n1 = 0;
    for (int s = 0; s < m; ++s) {
      double d1 = sqdist(config, labels[s], mu1);
      double d2 = sqdist(config, labels[s], mu2);
      next[s] = d1 <= d2 ? 0 : 1;  // tie goes to the lower-index center
      n1 += next[s] == 0;
    }
    if (n1 == 0 || n1 == m) break;  // emptied a block; keep last assignment
    bool changed = next != assign;
    assign = std::move(next);
    if (iter > 0 && !changed) break;
    std::vector<double> c1(d, 0.0), c2(d, 0.0);
    for (int s = 0; s < m; ++s) {
      auto x = config.pos(labels[s]);
      auto& c = assign[s] == 0 ? c1 : c2;
      for (int k = 0; k < d; ++k) c[k] += x[k];
    }
    for (int k = 0; k < d; ++k) {
      c1[k] /= n1;
      c2[k] /= (m - n1);
    }
    mu1 = std::move(c1);
    mu2 = std::move(c2);
  }

  Cluster b1, b2;
  for (int s = 0; s < m; ++s) (assign[s] == 0 ? b1 : b2).add(labels[s]);
  return {b1, b2};
}

namespace {

void split_recursive(const Configuration& config, const Cluster& members,
                     std::vector<Cluster>& family) {
  if (members.count() < 2) return;
  auto [a, b] = two_means_split(config, members);
  if (a.count() > 1) family.push_back(a);
  if (b.count() > 1) family.push_back(b);
  split_recursive(config, a, family);
  split_recursive(config, b, family);
}

}  // namespace

BinaryHierarchy hc_2means(const Configuration& config) {
  const int n = config.count();
  if (n < 2) throw DomainError("hc_2means needs at least two robots");
  std::vector<Cluster> family;
  split_recursive(config, Cluster::full(n), family);
  return BinaryHierarchy::from_cluster_family(n, std::move(family));
}

namespace {

// Shared scan over all non-root clusters. Returns the minimum separation
// value; degenerate hyperplanes are reported through *degenerate.
double min_separation_over_tree(const Configuration& config,
                                const BinaryHierarchy& tree,
                                bool* degenerate) {
  const int d = config.dim();
  const int nodes = tree.node_count();
  std::vector<double> cent(std::size_t(nodes) * d, 0.0);
  for (int node : tree.postorder()) {
    double* c = cent.data() + std::size_t(node) * d;
    if (tree.is_leaf(node)) {
      auto x = config.pos(tree.members(node)[0]);
      for (int k = 0; k < d; ++k) c[k] = x[k];
    } else {
      int l = tree.left(node), r = tree.right(node);
      double wl = tree.member_count(l), wr = tree.member_count(r);
      const double* cl = cent.data() + std::size_t(l) * d;
      const double* cr = cent.data() + std::size_t(r) * d;
      for (int k = 0; k < d; ++k)
        c[k] = (wl * cl[k] + wr * cr[k]) / (wl + wr);
    }
  }
  *degenerate = false;
  double worst = HUGE_VAL;
  std::vector<double> mid(d), ehat(d);
  const auto& kern = kernels::active();
  for (int node = 0; node < nodes; ++node) {
    if (tree.parent_node(node) < 0) continue;
    int sib = tree.sibling_node(node);
    const double* ci = cent.data() + std::size_t(node) * d;
    const double* cs = cent.data() + std::size_t(sib) * d;
    double nrm = 0.0;
    for (int k = 0; k < d; ++k) {
      double e = ci[k] - cs[k];
      ehat[k] = e;
      mid[k] = 0.5 * (ci[k] + cs[k]);
      nrm += e * e;
    }
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) {
      *degenerate = true;
      return -HUGE_VAL;
    }
    for (int k = 0; k < d; ++k) ehat[k] /= nrm;
    const auto& mem = tree.members(node);
    debug::separation_evals += mem.size();
    double v = kern.min_sep_slack(config.positions().data(),
                                  config.radii().data(), mem.data(),
                                  int(mem.size()), mid.data(), ehat.data(), d,
                                  0.0);
    if (v < worst) worst = v;
  }
  return worst;
}

}  // namespace

bool stratum_contains(const Configuration& config, const BinaryHierarchy& tree,
                      StratumMode mode) {
  if (config.count() != tree.leaf_count())
    throw DomainError("stratum test: tree is over a different label set");
  bool degenerate = false;
  double worst = min_separation_over_tree(config, tree, &degenerate);
  if (degenerate) {
    if (mode == StratumMode::kInterior) return false;
    throw DomainError(
        "stratum test: degenerate hyperplane in closed-stratum mode");
  }
  return mode == StratumMode::kClosed ? worst >= -tol::kGeom
                                      : worst > tol::kGeom;
}

double stratum_margin(const Configuration& config,
                      const BinaryHierarchy& tree) {
  bool degenerate = false;
  double worst = min_separation_over_tree(config, tree, &degenerate);
  if (degenerate)
    throw DomainError("stratum_margin: degenerate hyperplane (e = 0)");
  return worst;
}

bool is_narrow(const Configuration& config, const Cluster& a,
               const Cluster& b) {
  auto ca = centroid(config, a);
  auto cb = centroid(config, b);
  double gap = 0.0;
  for (int k = 0; k < config.dim(); ++k)
    gap += (ca[k] - cb[k]) * (ca[k] - cb[k]);
  gap = std::sqrt(gap);
  double rho = std::max(cluster_radius(config, a), cluster_radius(config, b));
  return rho < 0.5 * gap;
}

bool is_standard(const Configuration& config, const BinaryHierarchy& tree) {
  for (const Cluster& c : tree.clusters()) {
    if (c.count() < 2) continue;
    auto kids = tree.children(c);
    if (!is_narrow(config, kids[0], kids[1])) return false;
  }
  return true;
}

}  // namespace hnc
