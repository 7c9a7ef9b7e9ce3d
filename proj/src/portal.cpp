#include "hnc/portal.hpp"

#include <cmath>
#include <complex>

#include "hnc/clustering.hpp"
#include "hnc/tolerances.hpp"

namespace hnc {

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    acc += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(acc);
}

// One outer Napoleon step in complex coordinates. Sides are taken in cyclic
// order and the output vertex i is the centroid of the equilateral erected
// on the side opposite input vertex i; collinear input uses the positive
// orientation.
std::array<std::complex<double>, 3> napoleon_outer_2d(
    const std::array<std::complex<double>, 3>& z) {
  double orient = std::imag(std::conj(z[1] - z[0]) * (z[2] - z[0]));
  double s = orient < 0.0 ? -1.0 : 1.0;
  const std::complex<double> rot(0.0, s * std::sqrt(3.0) / 6.0);
  auto vertex = [&](const std::complex<double>& a,
                    const std::complex<double>& b) {
    return 0.5 * (a + b) - rot * (b - a);
  };
  return {vertex(z[1], z[2]), vertex(z[2], z[0]), vertex(z[0], z[1])};
}

}  // namespace

Triangle3 napoleon_double_outer(const Triangle3& tri) {
  const int d = tri.dim;
  if (d < 2) throw DomainError("napoleon: ambient dimension must be >= 2");
  for (const auto& p : tri.pts)
    if (int(p.size()) != d) throw DomainError("napoleon: point size mismatch");

  std::vector<double> g(d, 0.0);
  for (const auto& p : tri.pts)
    for (int k = 0; k < d; ++k) g[k] += p[k] / 3.0;

  double scale = std::max({dist(tri.pts[0], tri.pts[1]),
                           dist(tri.pts[1], tri.pts[2]),
                           dist(tri.pts[0], tri.pts[2])});
  if (scale == 0.0)
    throw DomainError("napoleon: all three vertices coincide");

  // Orthonormal basis of the triangle's plane. For collinear input the
  // second direction comes from the first coordinate axis off the line.
  std::vector<double> b1(d, 0.0), b2(d, 0.0);
  {
    double n1 = 0.0;
    for (int k = 0; k < d; ++k) {
      b1[k] = tri.pts[1][k] - tri.pts[0][k];
      n1 += b1[k] * b1[k];
    }
    if (n1 == 0.0) {
      for (int k = 0; k < d; ++k) b1[k] = tri.pts[2][k] - tri.pts[0][k];
      n1 = 0.0;
      for (int k = 0; k < d; ++k) n1 += b1[k] * b1[k];
    }
    n1 = std::sqrt(n1);
    for (int k = 0; k < d; ++k) b1[k] /= n1;

    double dot = 0.0, n2 = 0.0;
    for (int k = 0; k < d; ++k) {
      b2[k] = tri.pts[2][k] - tri.pts[0][k];
      dot += b2[k] * b1[k];
    }
    for (int k = 0; k < d; ++k) {
      b2[k] -= dot * b1[k];
      n2 += b2[k] * b2[k];
    }
    n2 = std::sqrt(n2);
    if (n2 <= tol::kGeom * scale) {
      int axis = 0;
      for (int k = 1; k < d; ++k)
        if (std::abs(b1[k]) < std::abs(b1[axis])) axis = k;
      n2 = 0.0;
      for (int k = 0; k < d; ++k) {
        b2[k] = (k == axis ? 1.0 : 0.0) - b1[axis] * b1[k];
        n2 += b2[k] * b2[k];
      }
      n2 = std::sqrt(n2);
    }
    for (int k = 0; k < d; ++k) b2[k] /= n2;
  }

  std::array<std::complex<double>, 3> z;
  for (int i = 0; i < 3; ++i) {
    double re = 0.0, im = 0.0;
    for (int k = 0; k < d; ++k) {
      re += (tri.pts[i][k] - g[k]) * b1[k];
      im += (tri.pts[i][k] - g[k]) * b2[k];
    }
    z[i] = {re, im};
  }

  z = napoleon_outer_2d(napoleon_outer_2d(z));

  Triangle3 out;
  out.dim = d;
  for (int i = 0; i < 3; ++i) {
    out.pts[i].resize(d);
    for (int k = 0; k < d; ++k)
      out.pts[i][k] = g[k] + z[i].real() * b1[k] + z[i].imag() * b2[k];
  }
  return out;
}

NapoleonTargets napoleon_offset_and_centroids(const Configuration& config,
                                              const PortalContext& ctx) {
  const int d = config.dim();
  Triangle3 tri;
  tri.dim = d;
  tri.pts[0] = centroid(config, ctx.triplet.a);
  tri.pts[1] = centroid(config, ctx.triplet.b);
  tri.pts[2] = centroid(config, ctx.triplet.c);
  Triangle3 nt = napoleon_double_outer(tri);

  const double na = ctx.triplet.a.count();
  const double nb = ctx.triplet.b.count();
  const double nc = ctx.triplet.c.count();
  const double np = na + nb + nc;
  auto cp = centroid(config, ctx.triplet.p());

  NapoleonTargets out;
  out.offset.resize(d);
  for (int k = 0; k < d; ++k) {
    double weighted =
        (na * nt.pts[0][k] + nb * nt.pts[1][k] + nc * nt.pts[2][k]) / np;
    out.offset[k] = cp[k] - weighted;
  }
  for (int i = 0; i < 3; ++i) {
    out.centers[i].resize(d);
    for (int k = 0; k < d; ++k)
      out.centers[i][k] = nt.pts[i][k] + out.offset[k];
  }
  return out;
}

namespace {

void require_symmetric(const Configuration& config, const PortalContext& ctx) {
  auto ca = centroid(config, ctx.triplet.a);
  auto cb = centroid(config, ctx.triplet.b);
  auto cc = centroid(config, ctx.triplet.c);
  double ab = dist(ca, cb), bc = dist(cb, cc), ac = dist(ca, cc);
  double scale = std::max({ab, bc, ac, 1.0});
  if (std::abs(ab - bc) > tol::kGeom * scale ||
      std::abs(ab - ac) > tol::kGeom * scale)
    throw DomainError(
        "portal: configuration is not symmetric (triplet centroids are not "
        "equilateral)");
}

// Distance of c(x|Q) to the separating hyperplane of cluster D in tree chi,
// signed positive on D's side.
double centroid_side_distance(const Configuration& config,
                              const BinaryHierarchy& chi, const Cluster& d_cl,
                              const std::vector<double>& cq) {
  auto e = centroid_separation(config, chi, d_cl);
  auto m = centroid_midpoint(config, chi, d_cl);
  double nrm = 0.0;
  for (double v : e) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0)
    throw DomainError("portal: degenerate hyperplane at " + d_cl.to_string());
  double s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    s += (cq[k] - m[k]) * (e[k] / nrm);
  return s;
}

}  // namespace

double consensus_radius(const Configuration& config, const PortalContext& ctx,
                        const Cluster& q) {
  if (!(q == ctx.triplet.a || q == ctx.triplet.b || q == ctx.triplet.c))
    throw DomainError("consensus_radius: Q must be one of the NNI-triplet");
  require_symmetric(config, ctx);
  auto cq = centroid(config, q);
  const Cluster p = ctx.triplet.p();
  double best = HUGE_VAL;
  for (const BinaryHierarchy* chi : {&ctx.sigma, &ctx.tau}) {
    best = std::min(best, centroid_side_distance(config, *chi, q, cq));
    Cluster parent = chi->parent(q);
    if (parent != p)
      best = std::min(best, centroid_side_distance(config, *chi, parent, cq));
  }
  return best;
}

Configuration portal_center(const Configuration& config,
                            const PortalContext& ctx) {
  const int d = config.dim();
  NapoleonTargets targets = napoleon_offset_and_centroids(config, ctx);
  std::vector<double> out = config.positions();
  const Cluster* qs[3] = {&ctx.triplet.a, &ctx.triplet.b, &ctx.triplet.c};
  for (int i = 0; i < 3; ++i) {
    auto cq = centroid(config, *qs[i]);
    for (int label : qs[i]->labels())
      for (int k = 0; k < d; ++k)
        out[std::size_t(label) * d + k] += targets.centers[i][k] - cq[k];
  }
  return config.with_positions(std::move(out));
}

Configuration portal_scale(const Configuration& config,
                           const PortalContext& ctx) {
  require_symmetric(config, ctx);
  const int d = config.dim();
  const Cluster p = ctx.triplet.p();
  auto cp = centroid(config, p);

  double sigma_scale = 0.0;
  const Cluster* qs[3] = {&ctx.triplet.a, &ctx.triplet.b, &ctx.triplet.c};
  for (int i = 0; i < 3; ++i) {
    double rho = cluster_radius(config, *qs[i]);
    double ball = consensus_radius(config, ctx, *qs[i]);
    if (ball <= 0.0)
      throw DomainError("portal: consensus ball has empty interior");
    sigma_scale = std::max(sigma_scale, (rho + ctx.alpha) / ball);
  }
  sigma_scale = std::max(sigma_scale, 1.0) - 1.0;
  if (sigma_scale == 0.0) return config;

  std::vector<double> out = config.positions();
  for (int i = 0; i < 3; ++i) {
    auto cq = centroid(config, *qs[i]);
    for (int label : qs[i]->labels())
      for (int k = 0; k < d; ++k)
        out[std::size_t(label) * d + k] += sigma_scale * (cq[k] - cp[k]);
  }
  return config.with_positions(std::move(out));
}

namespace {

// Rigidly drives I and its local complement apart until every member's
// separation reaches r_k + alpha; the parent barycenter is unchanged.
Configuration portal_separate(const Configuration& config,
                              const BinaryHierarchy& sigma, const Cluster& i,
                              double alpha) {
  const int d = config.dim();
  const Cluster sib = sigma.sibling(i);
  const Cluster parent = sigma.parent(i);

  double lambda = 0.0;
  for (const Cluster* k_cl : {&i, &sib}) {
    for (int k : k_cl->labels()) {
      double s = separation(config, sigma, k, *k_cl);
      lambda = std::max(lambda, -(s - config.radius(k) - alpha));
    }
  }
  if (lambda == 0.0) return config;

  std::vector<double> out = config.positions();
  const double par_count = parent.count();
  for (const Cluster* k_cl : {&i, &sib}) {
    auto e = centroid_separation(config, sigma, *k_cl);
    double nrm = 0.0;
    for (double v : e) nrm += v * v;
    nrm = std::sqrt(nrm);
    if (nrm == 0.0)
      throw InternalError("portal_merge: degenerate hyperplane at " +
                          k_cl->to_string());
    const Cluster other = *k_cl == i ? sib : i;
    double coef = 2.0 * lambda * other.count() / par_count;
    for (int label : k_cl->labels())
      for (int k = 0; k < d; ++k)
        out[std::size_t(label) * d + k] += coef * (e[k] / nrm);
  }
  return config.with_positions(std::move(out));
}

}  // namespace

Configuration portal_merge(const Configuration& config,
                           const PortalContext& ctx) {
  Configuration out = config;
  Cluster i = ctx.triplet.p();
  const Cluster root = ctx.sigma.root();
  while (i != root) {
    out = portal_separate(out, ctx.sigma, i, ctx.alpha);
    i = ctx.sigma.parent(i);
  }
  return out;
}

Configuration portal_map(const Configuration& config,
                         const PortalContext& ctx) {
  if (stratum_contains(config, ctx.sigma, StratumMode::kInterior) &&
      stratum_contains(config, ctx.tau, StratumMode::kInterior))
    return config;  // already a portal configuration
  return portal_merge(portal_scale(portal_center(config, ctx), ctx), ctx);
}

}  // namespace hnc
