#pragma once

#include <string>
#include <vector>

#include "hnc/hierarchy.hpp"

namespace hnc {

// The three disjoint clusters whose regrouping distinguishes an NNI-adjacent
// pair (sigma, tau): {A u B} is the cluster unique to sigma and {B u C} the
// cluster unique to tau.
struct NniTriplet {
  Cluster a, b, c;
  Cluster p() const { return a | b | c; }
};

// NNI move at grandchild cluster g: swaps g with its parent's sibling. The
// empty cluster is the identity move. A cluster without a grandparent is a
// domain error.
BinaryHierarchy nni_move(const BinaryHierarchy& tree, const Cluster& g);

bool nni_adjacent(const BinaryHierarchy& s, const BinaryHierarchy& t);
NniTriplet nni_triplet(const BinaryHierarchy& s, const BinaryHierarchy& t);

// (2n-3)!!, exact up to 128-bit range; n < 2 is a domain error.
unsigned __int128 count_trees(int n);
std::string uint128_to_string(unsigned __int128 v);

// Table-style NNI control law: returns the grandchild cluster of the next
// move toward `goal` (empty iff current == goal).
Cluster nni_control(const BinaryHierarchy& current,
                    const BinaryHierarchy& goal);

// Iterates move(control) to the fixpoint; the returned path includes both
// endpoints and its move count never exceeds (n-1)(n-2)/2.
std::vector<BinaryHierarchy> nni_navigate(const BinaryHierarchy& from,
                                          const BinaryHierarchy& to);

inline long nni_path_bound(int n) { return long(n - 1) * (n - 2) / 2; }

}  // namespace hnc
