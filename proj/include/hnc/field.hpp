#pragma once

#include <cstdint>
#include <vector>

#include "hnc/clustering.hpp"
#include "hnc/configuration.hpp"
#include "hnc/hierarchy.hpp"

namespace hnc {

// Parameters of the hierarchy-preserving field f_{tau,y}: the goal
// configuration y must support tau (closed stratum), 0 < alpha < beta.
struct FieldParams {
  Configuration goal;
  BinaryHierarchy tree;
  double alpha = 0.2;
  double beta = 1.0;
};

// (partition P subset C(tau), sign vector b in {-1,+1}^P) naming a
// substratum policy h_{P,b}. Blocks are kept in increasing lowest-label
// order.
struct PolicyIndex {
  std::vector<Cluster> blocks;
  std::vector<int> signs;

  bool operator==(const PolicyIndex&) const = default;
};

// V(P,b) = sum_I b_I |I|^2.
int policy_priority(const PolicyIndex& index);

struct EvalCounters {
  std::uint64_t separation_evals = 0;  // scalar s_{k,K} evaluations
  std::uint64_t pair_terms = 0;        // pairwise Lie-derivative terms
  std::uint64_t align_terms = 0;       // hyperplane-alignment terms
  std::uint64_t total() const {
    return separation_evals + pair_terms + align_terms;
  }
};

// Evaluates f_{tau,y} and its substratum-policy decomposition. All methods
// are pure in (params, x); every public evaluation builds its own workspace,
// so a single evaluator may be shared across threads.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(FieldParams params);

  const FieldParams& params() const { return params_; }
  int dim() const { return d_; }
  int count() const { return n_; }

  // f_{tau,y}(x); requires x in the closed stratum of tau.
  std::vector<double> operator()(const Configuration& x) const;

  // Integration path: positions only (radii are the system's), no stratum
  // re-check; post-step predicates are the caller's job.
  std::vector<double> eval_positions(const std::vector<double>& positions,
                                     EvalCounters* counters = nullptr) const;

  // Membership in D^A(I) (intra-cluster safety + alignment Lie terms) and
  // D^H(I) (children separated by r_k + alpha).
  bool in_set_a(const Configuration& x, const Cluster& i) const;
  bool in_set_h(const Configuration& x, const Cluster& i) const;

  // Highest-priority policy index whose domain contains x.
  PolicyIndex policy_select(const Configuration& x) const;
  bool policy_domain_contains(const PolicyIndex& index,
                              const Configuration& x) const;
  // h_{P,b}(x); requires x in D(P,b).
  std::vector<double> substratum_policy(const PolicyIndex& index,
                                        const Configuration& x) const;

  // Constituent fields on an explicit input velocity assignment u
  // (whole-configuration vectors, row-major n x d).
  std::vector<double> attracting_field(const Configuration& x,
                                       std::vector<double> u,
                                       const Cluster& i) const;
  std::vector<double> split_preserving_field(const Configuration& x,
                                             std::vector<double> u,
                                             const Cluster& i) const;
  std::vector<double> separation_field(const Configuration& x,
                                       std::vector<double> u,
                                       const Cluster& i) const;

  // Scalar pieces, exposed for verification: repulsion gain A_alpha,
  // separation magnitude B_beta, the envelope phi, and L_u s_{k,K}.
  double repulsion_gain(const Configuration& x, const std::vector<double>& u,
                        const Cluster& i) const;
  double separation_gain(const Configuration& x, const Cluster& i) const;
  double phi(double sep, double radius) const;
  double lie_separation(const Configuration& x, const std::vector<double>& u,
                        int label, const Cluster& k) const;

 private:
  struct Workspace;

  void prepare(Workspace& ws, const double* positions) const;
  double child_min_slack(Workspace& ws, int node) const;
  bool in_h(Workspace& ws, int node) const;
  std::vector<double> fhat(Workspace& ws, int node,
                           std::vector<double> u) const;
  void apply_fa(Workspace& ws, int node, std::vector<double>& u) const;
  void apply_fs(Workspace& ws, int node, std::vector<double>& u) const;
  void apply_fh(Workspace& ws, int node, std::vector<double>& u) const;
  void select_rec(Workspace& ws, int node, PolicyIndex& out) const;
  std::vector<double> hhat(Workspace& ws, int node, std::vector<double> u,
                           const std::vector<int>& block_sign) const;
  std::vector<int> block_signs_by_node(const PolicyIndex& index) const;
  void require_matching(const Configuration& x) const;
  void require_in_stratum(const Configuration& x) const;

  FieldParams params_;
  int n_;
  int d_;
  // Goal-side cluster functions, fixed at construction.
  std::vector<double> goal_cent_;   // node-major
  std::vector<double> goal_e_;      // e_K(y)
  std::vector<double> goal_m_;      // m_K(y)
  double exp_beta_alpha_;           // e^{-(beta-alpha)}
};

}  // namespace hnc
