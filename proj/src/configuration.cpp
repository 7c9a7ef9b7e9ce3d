#include "hnc/configuration.hpp"

#include <cmath>

#include "hnc/hierarchy.hpp"
#include "hnc/kernels.hpp"

namespace hnc {

namespace debug {
thread_local std::uint64_t separation_evals = 0;
}  // namespace debug

Configuration::Configuration(int dim, std::vector<double> positions,
                             std::vector<double> radii)
    : dim_(dim),
      n_(int(radii.size())),
      positions_(std::move(positions)),
      radii_(std::move(radii)) {
  if (dim_ <= 0) throw DomainError("configuration dimension must be positive");
  if (positions_.size() != std::size_t(n_) * dim_)
    throw DomainError("positions size does not match radii count * dim");
  for (double v : positions_)
    if (!std::isfinite(v)) throw DomainError("non-finite coordinate");
  for (double r : radii_) {
    if (!std::isfinite(r) || r < 0.0)
      throw DomainError("radii must be finite and nonnegative");
  }
}

std::vector<Violation> validate(const Configuration& config) {
  std::vector<Violation> out;
  const int n = config.count();
  const int d = config.dim();
  for (int i = 0; i < n; ++i) {
    auto xi = config.pos(i);
    for (int j = i + 1; j < n; ++j) {
      auto xj = config.pos(j);
      double acc = 0.0;
      for (int k = 0; k < d; ++k) acc += (xi[k] - xj[k]) * (xi[k] - xj[k]);
      double gap = std::sqrt(acc) - config.radius(i) - config.radius(j);
      if (gap <= 0.0) out.push_back({i, j, gap});
    }
  }
  return out;
}

double min_clearance(const Configuration& config, int* out_i, int* out_j) {
  return kernels::active().min_clearance(config.positions().data(),
                                         config.radii().data(), config.count(),
                                         config.dim(), out_i, out_j);
}

std::vector<double> centroid(const Configuration& config,
                             const Cluster& cluster) {
  if (cluster.empty()) throw DomainError("centroid of empty cluster");
  const int d = config.dim();
  std::vector<double> c(d, 0.0);
  int m = 0;
  for (int i : cluster.labels()) {
    auto x = config.pos(i);
    for (int k = 0; k < d; ++k) c[k] += x[k];
    ++m;
  }
  for (int k = 0; k < d; ++k) c[k] /= m;
  return c;
}

std::vector<double> centroid_separation(const Configuration& config,
                                        const BinaryHierarchy& tree,
                                        const Cluster& cluster) {
  auto ci = centroid(config, cluster);
  auto cs = centroid(config, tree.sibling(cluster));
  for (int k = 0; k < config.dim(); ++k) ci[k] -= cs[k];
  return ci;
}

std::vector<double> centroid_midpoint(const Configuration& config,
                                      const BinaryHierarchy& tree,
                                      const Cluster& cluster) {
  auto ci = centroid(config, cluster);
  auto cs = centroid(config, tree.sibling(cluster));
  for (int k = 0; k < config.dim(); ++k) ci[k] = 0.5 * (ci[k] + cs[k]);
  return ci;
}

double separation(const Configuration& config, const BinaryHierarchy& tree,
                  int label, const Cluster& cluster) {
  if (!cluster.contains(label))
    throw DomainError("separation: label " + std::to_string(label + 1) +
                      " not in cluster " + cluster.to_string());
  auto e = centroid_separation(config, tree, cluster);
  double nrm = 0.0;
  for (double v : e) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0)
    throw DomainError("separation: degenerate hyperplane (e = 0) at cluster " +
                      cluster.to_string());
  auto m = centroid_midpoint(config, tree, cluster);
  auto x = config.pos(label);
  ++debug::separation_evals;
  double s = 0.0;
  for (int k = 0; k < config.dim(); ++k) s += (x[k] - m[k]) * (e[k] / nrm);
  return s;
}

double cluster_radius(const Configuration& config, const Cluster& cluster) {
  if (cluster.empty()) throw DomainError("cluster_radius of empty cluster");
  auto c = centroid(config, cluster);
  double best = 0.0;
  for (int i : cluster.labels()) {
    auto x = config.pos(i);
    double acc = 0.0;
    for (int k = 0; k < config.dim(); ++k) acc += (x[k] - c[k]) * (x[k] - c[k]);
    double v = std::sqrt(acc) + config.radius(i);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace hnc
