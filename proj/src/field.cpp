#include "hnc/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hnc/kernels.hpp"
#include "hnc/tolerances.hpp"

namespace hnc {

int policy_priority(const PolicyIndex& index) {
  int v = 0;
  for (std::size_t i = 0; i < index.blocks.size(); ++i) {
    int c = index.blocks[i].count();
    v += index.signs[i] * c * c;
  }
  return v;
}

// Per-evaluation scratch: cluster functions of x at every node, the eager
// D^A sweep, and lazily cached child separation slacks.
struct FieldEvaluator::Workspace {
  const double* x = nullptr;
  std::vector<double> cent, e, m, ehat;
  std::vector<double> enorm;
  std::vector<signed char> in_a;
  std::vector<double> min_slack;  // min_k (s_{k,node} - r_k); NaN = unknown
  EvalCounters counters;
};

FieldEvaluator::FieldEvaluator(FieldParams params)
    : params_(std::move(params)),
      n_(params_.goal.count()),
      d_(params_.goal.dim()) {
  if (params_.alpha <= 0.0)
    throw DomainError("field params: alpha must be positive");
  if (params_.beta <= params_.alpha)
    throw DomainError("field params: beta must exceed alpha");
  if (params_.tree.leaf_count() != n_)
    throw DomainError("field params: tree and goal sizes differ");
  if (!stratum_contains(params_.goal, params_.tree, StratumMode::kClosed))
    throw DomainError(
        "field params: goal does not support the tree (closed stratum)");
  exp_beta_alpha_ = std::exp(-(params_.beta - params_.alpha));

  const auto& t = params_.tree;
  const int nodes = t.node_count();
  goal_cent_.assign(std::size_t(nodes) * d_, 0.0);
  for (int node : t.postorder()) {
    double* c = goal_cent_.data() + std::size_t(node) * d_;
    if (t.is_leaf(node)) {
      auto y = params_.goal.pos(t.members(node)[0]);
      for (int k = 0; k < d_; ++k) c[k] = y[k];
    } else {
      int l = t.left(node), r = t.right(node);
      double wl = t.member_count(l), wr = t.member_count(r);
      const double* cl = goal_cent_.data() + std::size_t(l) * d_;
      const double* cr = goal_cent_.data() + std::size_t(r) * d_;
      for (int k = 0; k < d_; ++k) c[k] = (wl * cl[k] + wr * cr[k]) / (wl + wr);
    }
  }
  goal_e_.assign(std::size_t(nodes) * d_, 0.0);
  goal_m_.assign(std::size_t(nodes) * d_, 0.0);
  for (int node = 0; node < nodes; ++node) {
    if (t.parent_node(node) < 0) continue;
    int sib = t.sibling_node(node);
    const double* ci = goal_cent_.data() + std::size_t(node) * d_;
    const double* cs = goal_cent_.data() + std::size_t(sib) * d_;
    for (int k = 0; k < d_; ++k) {
      goal_e_[std::size_t(node) * d_ + k] = ci[k] - cs[k];
      goal_m_[std::size_t(node) * d_ + k] = 0.5 * (ci[k] + cs[k]);
    }
  }
}

void FieldEvaluator::prepare(Workspace& ws, const double* positions) const {
  const auto& t = params_.tree;
  const int nodes = t.node_count();
  ws.x = positions;
  ws.cent.assign(std::size_t(nodes) * d_, 0.0);
  ws.e.assign(std::size_t(nodes) * d_, 0.0);
  ws.m.assign(std::size_t(nodes) * d_, 0.0);
  ws.ehat.assign(std::size_t(nodes) * d_, 0.0);
  ws.enorm.assign(nodes, 0.0);
  ws.in_a.assign(nodes, 0);
  ws.min_slack.assign(nodes, std::numeric_limits<double>::quiet_NaN());

  for (int node : t.postorder()) {
    double* c = ws.cent.data() + std::size_t(node) * d_;
    if (t.is_leaf(node)) {
      const double* x = positions + std::size_t(t.members(node)[0]) * d_;
      for (int k = 0; k < d_; ++k) c[k] = x[k];
    } else {
      int l = t.left(node), r = t.right(node);
      double wl = t.member_count(l), wr = t.member_count(r);
      const double* cl = ws.cent.data() + std::size_t(l) * d_;
      const double* cr = ws.cent.data() + std::size_t(r) * d_;
      for (int k = 0; k < d_; ++k) c[k] = (wl * cl[k] + wr * cr[k]) / (wl + wr);
    }
  }
  for (int node = 0; node < nodes; ++node) {
    if (t.parent_node(node) < 0) continue;
    int sib = t.sibling_node(node);
    const double* ci = ws.cent.data() + std::size_t(node) * d_;
    const double* cs = ws.cent.data() + std::size_t(sib) * d_;
    double nrm = 0.0;
    for (int k = 0; k < d_; ++k) {
      double ev = ci[k] - cs[k];
      ws.e[std::size_t(node) * d_ + k] = ev;
      ws.m[std::size_t(node) * d_ + k] = 0.5 * (ci[k] + cs[k]);
      nrm += ev * ev;
    }
    nrm = std::sqrt(nrm);
    ws.enorm[node] = nrm;
    if (nrm > 0.0) {
      for (int k = 0; k < d_; ++k)
        ws.ehat[std::size_t(node) * d_ + k] =
            ws.e[std::size_t(node) * d_ + k] / nrm;
    }
  }

  // Eager D^A sweep via D^A(I) = D^A(I_L) n D^A(I_R) n Ahat(I_L, I_R); the
  // pairwise scan across each split makes the whole sweep O(n^2).
  const auto& kern = kernels::active();
  const double* radii = params_.goal.radii().data();
  for (int node : t.postorder()) {
    if (t.is_leaf(node)) {
      ws.in_a[node] = 1;
      continue;
    }
    int l = t.left(node), r = t.right(node);
    if (!ws.in_a[l] || !ws.in_a[r]) continue;
    const auto& ml = t.members(l);
    const auto& mr = t.members(r);
    ws.counters.pair_terms += std::uint64_t(ml.size()) * mr.size();
    double worst = kern.min_pair_align(positions, params_.goal.positions().data(),
                                       radii, ml.data(), int(ml.size()),
                                       mr.data(), int(mr.size()), d_);
    if (worst < tol::kGeom) continue;
    bool ok = true;
    for (int child : {l, r}) {
      const double* ex = ws.e.data() + std::size_t(child) * d_;
      const double* mx = ws.m.data() + std::size_t(child) * d_;
      const double* ey = goal_e_.data() + std::size_t(child) * d_;
      const double* my = goal_m_.data() + std::size_t(child) * d_;
      for (std::uint16_t k : t.members(child)) {
        const double* xk = positions + std::size_t(k) * d_;
        const double* yk =
            params_.goal.positions().data() + std::size_t(k) * d_;
        double term = 0.0;
        for (int kk = 0; kk < d_; ++kk)
          term += (yk[kk] - my[kk]) * ex[kk] + (xk[kk] - mx[kk]) * ey[kk];
        ++ws.counters.align_terms;
        if (term < tol::kGeom) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
    }
    ws.in_a[node] = ok;
  }
}

double FieldEvaluator::child_min_slack(Workspace& ws, int node) const {
  double v = ws.min_slack[node];
  if (!std::isnan(v)) return v;
  const auto& t = params_.tree;
  if (ws.enorm[node] == 0.0)
    throw DomainError("field: degenerate hyperplane (e = 0) at cluster " +
                      t.cluster(node).to_string());
  const auto& mem = t.members(node);
  ws.counters.separation_evals += mem.size();
  v = kernels::active().min_sep_slack(
      ws.x, params_.goal.radii().data(), mem.data(), int(mem.size()),
      ws.m.data() + std::size_t(node) * d_,
      ws.ehat.data() + std::size_t(node) * d_, d_, 1.0);
  ws.min_slack[node] = v;
  return v;
}

bool FieldEvaluator::in_h(Workspace& ws, int node) const {
  const auto& t = params_.tree;
  if (t.is_leaf(node)) return true;
  double v = std::min(child_min_slack(ws, t.left(node)),
                      child_min_slack(ws, t.right(node)));
  return v >= params_.alpha + tol::kGeom;
}

void FieldEvaluator::apply_fa(Workspace& ws, int node,
                              std::vector<double>& u) const {
  const auto& t = params_.tree;
  const double* y = params_.goal.positions().data();
  for (std::uint16_t k : t.members(node)) {
    for (int kk = 0; kk < d_; ++kk)
      u[std::size_t(k) * d_ + kk] =
          -(ws.x[std::size_t(k) * d_ + kk] - y[std::size_t(k) * d_ + kk]);
  }
}

void FieldEvaluator::apply_fs(Workspace& ws, int node,
                              std::vector<double>& u) const {
  const auto& t = params_.tree;
  if (t.is_leaf(node)) {  // singleton clusters fall back to the attractor
    apply_fa(ws, node, u);
    return;
  }
  int l = t.left(node), r = t.right(node);
  double b_beta =
      std::max(params_.beta - std::min(child_min_slack(ws, l),
                                       child_min_slack(ws, r)),
               0.0);
  const double* cx = ws.cent.data() + std::size_t(node) * d_;
  const double* cy = goal_cent_.data() + std::size_t(node) * d_;
  const double inv_size = 1.0 / t.member_count(node);
  for (int child : {l, r}) {
    int other = child == l ? r : l;
    double coef = 2.0 * b_beta * t.member_count(other) * inv_size;
    const double* eh = ws.ehat.data() + std::size_t(child) * d_;
    for (std::uint16_t k : t.members(child)) {
      for (int kk = 0; kk < d_; ++kk)
        u[std::size_t(k) * d_ + kk] = -(cx[kk] - cy[kk]) + coef * eh[kk];
    }
  }
}

void FieldEvaluator::apply_fh(Workspace& ws, int node,
                              std::vector<double>& u) const {
  const auto& t = params_.tree;
  if (t.is_leaf(node)) return;  // identity on u
  int l = t.left(node), r = t.right(node);
  if (ws.enorm[l] == 0.0 || ws.enorm[r] == 0.0)
    throw DomainError("field: degenerate hyperplane (e = 0) at cluster " +
                      t.cluster(node).to_string());

  // Cluster functions of the incoming velocity assignment.
  std::vector<double> cu_l(d_, 0.0), cu_r(d_, 0.0);
  for (std::uint16_t k : t.members(l))
    for (int kk = 0; kk < d_; ++kk) cu_l[kk] += u[std::size_t(k) * d_ + kk];
  for (std::uint16_t k : t.members(r))
    for (int kk = 0; kk < d_; ++kk) cu_r[kk] += u[std::size_t(k) * d_ + kk];
  for (int kk = 0; kk < d_; ++kk) {
    cu_l[kk] /= t.member_count(l);
    cu_r[kk] /= t.member_count(r);
  }
  std::vector<double> mu(d_);
  for (int kk = 0; kk < d_; ++kk) mu[kk] = 0.5 * (cu_l[kk] + cu_r[kk]);

  double a_alpha = 0.0;
  for (int child : {l, r}) {
    const double* ex = ws.e.data() + std::size_t(child) * d_;
    const double* mx = ws.m.data() + std::size_t(child) * d_;
    const double nrm = ws.enorm[child];
    std::vector<double> eu(d_);
    for (int kk = 0; kk < d_; ++kk)
      eu[kk] = child == l ? cu_l[kk] - cu_r[kk] : cu_r[kk] - cu_l[kk];
    double e_dot_eu = 0.0;
    for (int kk = 0; kk < d_; ++kk) e_dot_eu += ex[kk] * eu[kk];
    for (std::uint16_t k : t.members(child)) {
      const double* xk = ws.x + std::size_t(k) * d_;
      const double* uk = u.data() + std::size_t(k) * d_;
      double s = 0.0, num = 0.0;
      for (int kk = 0; kk < d_; ++kk) {
        s += (xk[kk] - mx[kk]) * (ex[kk] / nrm);
        num += (uk[kk] - mu[kk]) * ex[kk] + (xk[kk] - mx[kk]) * eu[kk];
      }
      ++ws.counters.separation_evals;
      double lie = num / nrm - s * e_dot_eu / (nrm * nrm);
      double slack = s - params_.goal.radius(k) - params_.alpha;
      double psi = std::max(-slack - lie, 0.0);
      if (psi == 0.0) continue;
      double ph =
          std::max((std::exp(-slack) - exp_beta_alpha_) /
                       (1.0 - exp_beta_alpha_),
                   0.0);
      a_alpha = std::max(a_alpha, ph * psi);
    }
  }
  if (a_alpha == 0.0) return;

  const double inv_size = 1.0 / t.member_count(node);
  for (int child : {l, r}) {
    int other = child == l ? r : l;
    double coef = 2.0 * a_alpha * t.member_count(other) * inv_size;
    const double* eh = ws.ehat.data() + std::size_t(child) * d_;
    for (std::uint16_t k : t.members(child))
      for (int kk = 0; kk < d_; ++kk)
        u[std::size_t(k) * d_ + kk] += coef * eh[kk];
  }
}

std::vector<double> FieldEvaluator::fhat(Workspace& ws, int node,
                                         std::vector<double> u) const {
  if (ws.in_a[node]) {
    apply_fa(ws, node, u);
    return u;
  }
  if (!in_h(ws, node)) {
    apply_fs(ws, node, u);
    return u;
  }
  const auto& t = params_.tree;
  u = fhat(ws, t.left(node), std::move(u));
  u = fhat(ws, t.right(node), std::move(u));
  apply_fh(ws, node, u);
  return u;
}

std::vector<double> FieldEvaluator::eval_positions(
    const std::vector<double>& positions, EvalCounters* counters) const {
  Workspace ws;
  prepare(ws, positions.data());
  std::vector<double> u(std::size_t(n_) * d_, 0.0);
  u = fhat(ws, params_.tree.root_node(), std::move(u));
  if (counters) *counters = ws.counters;
  return u;
}

void FieldEvaluator::require_matching(const Configuration& x) const {
  if (x.count() != n_ || x.dim() != d_)
    throw DomainError("field: configuration shape mismatch");
  if (x.radii() != params_.goal.radii())
    throw DomainError("field: radii differ from the system's radii");
}

void FieldEvaluator::require_in_stratum(const Configuration& x) const {
  if (!stratum_contains(x, params_.tree, StratumMode::kClosed))
    throw DomainError("field: configuration outside the closed stratum");
}

std::vector<double> FieldEvaluator::operator()(const Configuration& x) const {
  require_matching(x);
  require_in_stratum(x);
  return eval_positions(x.positions());
}

bool FieldEvaluator::in_set_a(const Configuration& x, const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0)
    throw DomainError("in_set_a: not a cluster of the tree: " + i.to_string());
  Workspace ws;
  prepare(ws, x.positions().data());
  return ws.in_a[node];
}

bool FieldEvaluator::in_set_h(const Configuration& x, const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0)
    throw DomainError("in_set_h: not a cluster of the tree: " + i.to_string());
  Workspace ws;
  prepare(ws, x.positions().data());
  return in_h(ws, node);
}

void FieldEvaluator::select_rec(Workspace& ws, int node,
                                PolicyIndex& out) const {
  if (ws.in_a[node]) {
    out.blocks.push_back(params_.tree.cluster(node));
    out.signs.push_back(+1);
    return;
  }
  if (!in_h(ws, node)) {
    out.blocks.push_back(params_.tree.cluster(node));
    out.signs.push_back(-1);
    return;
  }
  select_rec(ws, params_.tree.left(node), out);
  select_rec(ws, params_.tree.right(node), out);
}

PolicyIndex FieldEvaluator::policy_select(const Configuration& x) const {
  require_matching(x);
  require_in_stratum(x);
  Workspace ws;
  prepare(ws, x.positions().data());
  PolicyIndex out;
  select_rec(ws, params_.tree.root_node(), out);
  return out;
}

std::vector<int> FieldEvaluator::block_signs_by_node(
    const PolicyIndex& index) const {
  const auto& t = params_.tree;
  if (index.blocks.size() != index.signs.size() || index.blocks.empty())
    throw DomainError("policy index: malformed");
  std::vector<int> by_node(t.node_count(), 0);
  Cluster seen;
  for (std::size_t b = 0; b < index.blocks.size(); ++b) {
    if (index.signs[b] != 1 && index.signs[b] != -1)
      throw DomainError("policy index: signs must be +1/-1");
    int node = t.node_of(index.blocks[b]);
    if (node < 0)
      throw DomainError("policy index: block is not a cluster of the tree: " +
                        index.blocks[b].to_string());
    if (!seen.disjoint(index.blocks[b]))
      throw DomainError("policy index: blocks overlap");
    seen = seen | index.blocks[b];
    by_node[node] = index.signs[b];
  }
  if (seen != t.root())
    throw DomainError("policy index: blocks do not partition the label set");
  return by_node;
}

bool FieldEvaluator::policy_domain_contains(const PolicyIndex& index,
                                            const Configuration& x) const {
  require_matching(x);
  auto by_node = block_signs_by_node(index);
  Workspace ws;
  prepare(ws, x.positions().data());
  const auto& t = params_.tree;
  for (int node = 0; node < t.node_count(); ++node) {
    if (by_node[node] == 0) continue;
    if (by_node[node] == +1 && !ws.in_a[node]) return false;
    for (int p = t.parent_node(node); p >= 0; p = t.parent_node(p))
      if (!in_h(ws, p)) return false;
  }
  return true;
}

std::vector<double> FieldEvaluator::hhat(Workspace& ws, int node,
                                         std::vector<double> u,
                                         const std::vector<int>& sign) const {
  if (sign[node] == +1) {
    apply_fa(ws, node, u);
    return u;
  }
  if (sign[node] == -1) {
    apply_fs(ws, node, u);
    return u;
  }
  const auto& t = params_.tree;
  u = hhat(ws, t.left(node), std::move(u), sign);
  u = hhat(ws, t.right(node), std::move(u), sign);
  apply_fh(ws, node, u);
  return u;
}

std::vector<double> FieldEvaluator::substratum_policy(
    const PolicyIndex& index, const Configuration& x) const {
  require_matching(x);
  require_in_stratum(x);
  auto by_node = block_signs_by_node(index);
  Workspace ws;
  prepare(ws, x.positions().data());
  const auto& t = params_.tree;
  for (int node = 0; node < t.node_count(); ++node) {
    if (by_node[node] == 0) continue;
    if (by_node[node] == +1 && !ws.in_a[node])
      throw DomainError("substratum_policy: x outside D(P,b)");
    for (int p = t.parent_node(node); p >= 0; p = t.parent_node(p))
      if (!in_h(ws, p))
        throw DomainError("substratum_policy: x outside D(P,b)");
  }
  std::vector<double> u(std::size_t(n_) * d_, 0.0);
  return hhat(ws, t.root_node(), std::move(u), by_node);
}

std::vector<double> FieldEvaluator::attracting_field(const Configuration& x,
                                                     std::vector<double> u,
                                                     const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0)
    throw DomainError("attracting_field: not a cluster: " + i.to_string());
  Workspace ws;
  prepare(ws, x.positions().data());
  apply_fa(ws, node, u);
  return u;
}

std::vector<double> FieldEvaluator::split_preserving_field(
    const Configuration& x, std::vector<double> u, const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0)
    throw DomainError("split_preserving_field: not a cluster: " +
                      i.to_string());
  Workspace ws;
  prepare(ws, x.positions().data());
  apply_fh(ws, node, u);
  return u;
}

std::vector<double> FieldEvaluator::separation_field(const Configuration& x,
                                                     std::vector<double> u,
                                                     const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0)
    throw DomainError("separation_field: not a cluster: " + i.to_string());
  Workspace ws;
  prepare(ws, x.positions().data());
  apply_fs(ws, node, u);
  return u;
}

double FieldEvaluator::repulsion_gain(const Configuration& x,
                                      const std::vector<double>& u,
                                      const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0 || params_.tree.is_leaf(node)) return 0.0;
  const auto& t = params_.tree;
  double a_alpha = 0.0;
  for (const Cluster& kc : t.children(i)) {
    for (int k : kc.labels()) {
      double s = separation(x, t, k, kc);
      double slack = s - x.radius(k) - params_.alpha;
      double psi = std::max(-slack - lie_separation(x, u, k, kc), 0.0);
      a_alpha = std::max(a_alpha, phi(s, x.radius(k)) * psi);
    }
  }
  return a_alpha;
}

double FieldEvaluator::separation_gain(const Configuration& x,
                                       const Cluster& i) const {
  require_matching(x);
  int node = params_.tree.node_of(i);
  if (node < 0 || params_.tree.is_leaf(node)) return 0.0;
  Workspace ws;
  prepare(ws, x.positions().data());
  return std::max(params_.beta -
                      std::min(child_min_slack(ws, params_.tree.left(node)),
                               child_min_slack(ws, params_.tree.right(node))),
                  0.0);
}

double FieldEvaluator::phi(double sep, double radius) const {
  double slack = sep - radius - params_.alpha;
  return std::max((std::exp(-slack) - exp_beta_alpha_) /
                      (1.0 - exp_beta_alpha_),
                  0.0);
}

double FieldEvaluator::lie_separation(const Configuration& x,
                                      const std::vector<double>& u, int label,
                                      const Cluster& k) const {
  require_matching(x);
  const auto& t = params_.tree;
  auto e = centroid_separation(x, t, k);
  auto m = centroid_midpoint(x, t, k);
  double nrm = 0.0;
  for (double v : e) nrm += v * v;
  nrm = std::sqrt(nrm);
  if (nrm == 0.0)
    throw DomainError("lie_separation: degenerate hyperplane at " +
                      k.to_string());
  // Cluster functions of u over K and its sibling.
  const Cluster sib = t.sibling(k);
  std::vector<double> cu_k(d_, 0.0), cu_s(d_, 0.0);
  for (int i : k.labels())
    for (int kk = 0; kk < d_; ++kk) cu_k[kk] += u[std::size_t(i) * d_ + kk];
  for (int i : sib.labels())
    for (int kk = 0; kk < d_; ++kk) cu_s[kk] += u[std::size_t(i) * d_ + kk];
  for (int kk = 0; kk < d_; ++kk) {
    cu_k[kk] /= k.count();
    cu_s[kk] /= sib.count();
  }
  double s = 0.0, num = 0.0, e_dot_eu = 0.0;
  auto xk = x.pos(label);
  for (int kk = 0; kk < d_; ++kk) {
    double eu = cu_k[kk] - cu_s[kk];
    double mu = 0.5 * (cu_k[kk] + cu_s[kk]);
    s += (xk[kk] - m[kk]) * (e[kk] / nrm);
    num += (u[std::size_t(label) * d_ + kk] - mu) * e[kk] +
           (xk[kk] - m[kk]) * eu;
    e_dot_eu += e[kk] * eu;
  }
  return num / nrm - s * e_dot_eu / (nrm * nrm);
}

}  // namespace hnc
