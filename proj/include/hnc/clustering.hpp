#pragma once

#include <utility>

#include "hnc/configuration.hpp"
#include "hnc/hierarchy.hpp"

namespace hnc {

enum class StratumMode {
  kClosed,    // s >= -kGeom at every predicate
  kInterior,  // s > +kGeom at every predicate
};

// One deterministic selection from the 2-means multi-function: Lloyd's
// algorithm on the centers, seeded at the farthest pair of points (ties by
// lowest index pair), assignment ties to the lower-index center, iterated to
// an assignment fixpoint (cap 100). Radii are ignored.
std::pair<Cluster, Cluster> two_means_split(const Configuration& config,
                                            const Cluster& members);

// Iterative 2-means divisive hierarchy: recursively applies two_means_split
// down to singletons. The input always lies in the closed stratum of the
// result.
BinaryHierarchy hc_2means(const Configuration& config);

bool stratum_contains(const Configuration& config, const BinaryHierarchy& tree,
                      StratumMode mode);

// min over clusters I and members i of s_{i,I,tau}(x); degenerate hyperplane
// is a domain error.
double stratum_margin(const Configuration& config,
                      const BinaryHierarchy& tree);

// Def: max block radius < half the centroid gap.
bool is_narrow(const Configuration& config, const Cluster& a,
               const Cluster& b);

// Narrow at every local split of every cluster.
bool is_standard(const Configuration& config, const BinaryHierarchy& tree);

}  // namespace hnc
