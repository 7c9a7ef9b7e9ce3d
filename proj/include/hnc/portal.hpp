#pragma once

#include <array>
#include <vector>

#include "hnc/configuration.hpp"
#include "hnc/hierarchy.hpp"
#include "hnc/nni.hpp"

namespace hnc {

// Three points in R^d (cluster centroids of the NNI-triplet members).
struct Triangle3 {
  int dim = 0;
  std::array<std::vector<double>, 3> pts;
};

// Two concatenated outer Napoleon transformations: the output triangle is
// equilateral, lies in the input's plane, and shares its centroid. All three
// points coincident is a degenerate-input error; d >= 2 required.
Triangle3 napoleon_double_outer(const Triangle3& tri);

// An NNI edge made geometric: the adjacent pair, its triplet, and the safety
// margin used by the transformation stages.
struct PortalContext {
  BinaryHierarchy sigma;
  BinaryHierarchy tau;
  NniTriplet triplet;
  double alpha;

  PortalContext(BinaryHierarchy s, BinaryHierarchy t, double a)
      : sigma(std::move(s)), tau(std::move(t)), alpha(a) {
    triplet = nni_triplet(sigma, tau);
    if (alpha <= 0.0) throw DomainError("portal: alpha must be positive");
  }
};

struct NapoleonTargets {
  std::array<std::vector<double>, 3> centers;  // c_A, c_B, c_C
  std::vector<double> offset;                  // barycenter compensation
};

// Double-outer Napoleon of the triplet's centroid triangle plus the offset
// that keeps the weighted mean over P = A u B u C at c(x|P).
NapoleonTargets napoleon_offset_and_centroids(const Configuration& config,
                                              const PortalContext& ctx);

// Consensus-ball radius of Q in {A, B, C} for a symmetric configuration:
// the least distance of c(x|Q) to the separating hyperplanes of Q and of its
// parents (below P) in both trees.
double consensus_radius(const Configuration& config, const PortalContext& ctx,
                        const Cluster& q);

// Stage 1: rigidly translate x|A, x|B, x|C onto the Napoleon targets.
Configuration portal_center(const Configuration& config,
                            const PortalContext& ctx);

// Stage 2: radial scaling from c(x|P) until every rho(x|Q) + alpha fits the
// consensus ball.
Configuration portal_scale(const Configuration& config,
                           const PortalContext& ctx);

// Stage 3: bottom-up separation of P and its ancestors' splits to margin
// r_k + alpha.
Configuration portal_merge(const Configuration& config,
                           const PortalContext& ctx);

// Identity on Port(sigma, tau), otherwise merge o scale o center. Requires
// config in the closed stratum of sigma.
Configuration portal_map(const Configuration& config,
                         const PortalContext& ctx);

}  // namespace hnc
