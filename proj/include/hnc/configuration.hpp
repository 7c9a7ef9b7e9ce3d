#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hnc/cluster.hpp"
#include "hnc/errors.hpp"

namespace hnc {

class BinaryHierarchy;

namespace debug {
// Running count of scalar separation-function evaluations (including the
// per-member scans inside stratum tests). Used by complexity assertions.
extern thread_local std::uint64_t separation_evals;
}  // namespace debug

// Labeled centers in R^d plus per-label disk radii. Positions are stored
// row-major (n x d). Construction checks finiteness and shape only; the
// strict pairwise-separation membership test is validate().
class Configuration {
 public:
  Configuration(int dim, std::vector<double> positions,
                std::vector<double> radii);

  int dim() const { return dim_; }
  int count() const { return n_; }

  std::span<const double> pos(int label) const {
    return {positions_.data() + std::size_t(label) * dim_,
            std::size_t(dim_)};
  }
  double radius(int label) const { return radii_[label]; }

  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& radii() const { return radii_; }

  Configuration with_positions(std::vector<double> positions) const {
    return Configuration(dim_, std::move(positions), radii_);
  }

 private:
  int dim_;
  int n_;
  std::vector<double> positions_;
  std::vector<double> radii_;
};

struct Violation {
  int i, j;    // offending labels (0-based)
  double gap;  // ||x_i - x_j|| - r_i - r_j, <= 0 for a violation
};

// Empty result means the configuration satisfies every strict pairwise
// separation; never throws.
std::vector<Violation> validate(const Configuration& config);

// Minimum over all pairs of ||x_i - x_j|| - r_i - r_j.
double min_clearance(const Configuration& config, int* out_i = nullptr,
                     int* out_j = nullptr);

// Arithmetic mean of member positions; radii ignored. Empty cluster is a
// domain error.
std::vector<double> centroid(const Configuration& config,
                             const Cluster& cluster);

// e_{I,tau} = c(x|I) - c(x|sibling of I). Root is a domain error.
std::vector<double> centroid_separation(const Configuration& config,
                                        const BinaryHierarchy& tree,
                                        const Cluster& cluster);

// m_{I,tau} = midpoint of the two sibling centroids.
std::vector<double> centroid_midpoint(const Configuration& config,
                                      const BinaryHierarchy& tree,
                                      const Cluster& cluster);

// s_{i,I,tau}: signed perpendicular distance of x_i to the bisector
// hyperplane of I and its sibling, positive on I's side. Degenerate
// hyperplane (e = 0) is a domain error.
double separation(const Configuration& config, const BinaryHierarchy& tree,
                  int label, const Cluster& cluster);

// rho(x|A) = max over a in A of ||x_a - c(x|A)|| + r_a.
double cluster_radius(const Configuration& config, const Cluster& cluster);

}  // namespace hnc
