#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <set>

#include "hnc/hierarchy.hpp"
#include "hnc/nni.hpp"
#include "support/test_util.hpp"

using namespace hnc;
using hnc::testing::all_trees;

TEST_CASE("newick parse/print round trip and grammar errors") {
  auto t = BinaryHierarchy::parse_newick("((1,2),(3,4));");
  CHECK(t.newick() == "((1,2),(3,4));");
  CHECK(t.leaf_count() == 4);
  // Child order is canonical regardless of input order.
  CHECK(BinaryHierarchy::parse_newick("((4,3),(2,1));").newick() ==
        "((1,2),(3,4));");

  CHECK_THROWS_AS(BinaryHierarchy::parse_newick("((1,2),3)"), ParseError);
  CHECK_THROWS_AS(BinaryHierarchy::parse_newick("((1,2),(3,5));"), ParseError);
  CHECK_THROWS_AS(BinaryHierarchy::parse_newick("((1,2),(3,3));"), ParseError);
  CHECK_THROWS_AS(BinaryHierarchy::parse_newick("((1,2,3),4);"), ParseError);
  CHECK_THROWS_AS(BinaryHierarchy::parse_newick("1;"), ParseError);

  std::mt19937_64 rng(5);
  for (int n : {3, 5, 8}) {
    auto trees = all_trees(n);
    for (int trial = 0; trial < 20; ++trial) {
      const auto& tr = trees[rng() % trees.size()];
      CHECK(BinaryHierarchy::parse_newick(tr.newick()) == tr);
    }
  }
}

TEST_CASE("cluster relations on the worked 6-leaf tree") {
  // Leaves 1..6 with interior clusters {1,6},{3,5},{2,4},{1,3,5,6}.
  auto t = BinaryHierarchy::parse_newick("(((1,6),(3,5)),(2,4));");
  Cluster i = Cluster::of({2, 4});  // {3,5} 1-based
  CHECK(t.parent(i) == Cluster::of({0, 2, 4, 5}));
  CHECK(t.sibling(i) == Cluster::of({0, 5}));

  CHECK(t.ancestors(t.root()).empty());
  CHECK(t.descendants(Cluster::of({0})).empty());
  CHECK(t.children(Cluster::of({0})).empty());
  CHECK_THROWS_AS(t.parent(t.root()), DomainError);
  CHECK_THROWS_AS(t.sibling(t.root()), DomainError);
  CHECK_THROWS_AS(t.parent(Cluster::of({1, 2})), DomainError);

  CHECK(t.node_count() == 11);
  auto anc = t.ancestors(Cluster::of({0}));
  REQUIRE(anc.size() == 3);
  CHECK(anc[0] == Cluster::of({0, 5}));
  CHECK(anc[2] == t.root());
}

TEST_CASE("tree enumeration oracle matches the double factorial") {
  CHECK(all_trees(2).size() == 1);
  CHECK(all_trees(3).size() == 3);
  CHECK(all_trees(4).size() == 15);
  CHECK(all_trees(5).size() == 105);
}

TEST_CASE("count_trees") {
  CHECK_THROWS_AS(count_trees(1), DomainError);
  CHECK(count_trees(2) == 1);
  CHECK(count_trees(4) == 15);
  CHECK(uint128_to_string(count_trees(6)) == "945");
  // n=8 against exhaustive enumeration of 8-leaf trees.
  CHECK(count_trees(8) == (unsigned __int128)all_trees(8).size());
  CHECK(uint128_to_string(count_trees(8)) == "135135");
  // 37!! computed independently by exact bignum arithmetic.
  CHECK(uint128_to_string(count_trees(20)) == "8200794532637891559375");
}

TEST_CASE("nni_move basics") {
  auto s = BinaryHierarchy::parse_newick("((1,2),3);");
  // Swap leaf 1 with the sibling {3} of its parent {1,2}.
  auto moved = nni_move(s, Cluster::of({0}));
  CHECK(moved == BinaryHierarchy::parse_newick("((2,3),1);"));
  CHECK(moved.has_cluster(Cluster::of({1, 2})));
  CHECK(!moved.has_cluster(Cluster::of({0, 1})));

  CHECK(nni_move(s, Cluster{}) == s);  // identity move
  CHECK_THROWS_AS(nni_move(s, Cluster::of({0, 1})), DomainError);  // no grandparent
  CHECK_THROWS_AS(nni_move(s, Cluster::of({2})), DomainError);
  CHECK_THROWS_AS(nni_move(s, Cluster::of({0, 2})), DomainError);  // not a cluster
}

namespace {

// All single-move neighbors of a tree (the exhaustive definition).
std::vector<BinaryHierarchy> neighbors(const BinaryHierarchy& t) {
  std::vector<BinaryHierarchy> out;
  for (const Cluster& g : t.clusters()) {
    int node = t.node_of(g);
    int p = t.parent_node(node);
    if (p < 0 || t.parent_node(p) < 0) continue;
    out.push_back(nni_move(t, g));
  }
  return out;
}

std::map<std::string, int> bfs_distances(const BinaryHierarchy& from) {
  std::map<std::string, int> dist{{from.newick(), 0}};
  std::queue<BinaryHierarchy> q;
  q.push(from);
  while (!q.empty()) {
    auto t = q.front();
    q.pop();
    int dt = dist.at(t.newick());
    for (const auto& nb : neighbors(t)) {
      auto [it, inserted] = dist.insert({nb.newick(), dt + 1});
      if (inserted) q.push(nb);
    }
  }
  return dist;
}

}  // namespace

TEST_CASE("the two NNI moves at a cluster's children give the other two "
          "resolutions of the 3-way split") {
  for (const auto& t : all_trees(4)) {
    for (const Cluster& i : t.clusters()) {
      if (i.count() < 2) continue;
      int node = t.node_of(i);
      if (t.parent_node(node) < 0) continue;
      auto kids = t.children(i);
      auto r1 = nni_move(t, kids[0]);
      auto r2 = nni_move(t, kids[1]);
      CHECK(!(r1 == t));
      CHECK(!(r2 == t));
      CHECK(!(r1 == r2));
      // All three trees resolve the same 3-set {kids[0], kids[1], sibling}.
      for (const auto& r : {r1, r2}) {
        CHECK(r.has_cluster(kids[0]));
        CHECK(r.has_cluster(kids[1]));
        CHECK(r.has_cluster(t.sibling(i)));
        CHECK(r.has_cluster(i | t.sibling(i)));
      }
    }
  }
}

TEST_CASE("nni_move is reversed by the defining reverse swap") {
  std::mt19937_64 rng(29);
  for (int n : {4, 5}) {
    for (const auto& t : all_trees(n)) {
      for (const Cluster& g : t.clusters()) {
        int node = t.node_of(g);
        int p = t.parent_node(node);
        if (p < 0 || t.parent_node(p) < 0) continue;
        auto moved = nni_move(t, g);
        // The reverse move swaps the old parent's sibling back with g.
        Cluster c = t.sibling(t.parent(g));
        auto back = nni_move(moved, c);
        CHECK(back == t);
      }
    }
  }
  (void)rng;
}

TEST_CASE("nni adjacency and triplet") {
  auto s = BinaryHierarchy::parse_newick("((1,2),3);");
  auto t = BinaryHierarchy::parse_newick("(1,(2,3));");
  CHECK(nni_adjacent(s, t));
  auto trip = nni_triplet(s, t);
  CHECK(trip.a == Cluster::of({0}));
  CHECK(trip.b == Cluster::of({1}));
  CHECK(trip.c == Cluster::of({2}));
  CHECK(trip.p() == Cluster::full(3));

  CHECK(!nni_adjacent(s, s));  // zero moves is not adjacency
  CHECK_THROWS_AS(nni_triplet(s, s), DomainError);

  auto cat = BinaryHierarchy::parse_newick("(((1,2),3),4);");
  auto bal = BinaryHierarchy::parse_newick("((1,3),(2,4));");
  CHECK(!nni_adjacent(cat, bal));

  // Agreement with the exhaustive one-move definition across all 15 trees.
  auto trees = all_trees(4);
  for (const auto& a : trees) {
    std::set<std::string> one_move;
    for (const auto& nb : neighbors(a)) one_move.insert(nb.newick());
    for (const auto& b : trees) {
      CHECK(nni_adjacent(a, b) == (one_move.count(b.newick()) > 0));
    }
  }
}

TEST_CASE("nni triplet matches the cluster-set differences exhaustively") {
  auto trees = all_trees(5);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& a = trees[rng() % trees.size()];
    auto nbs = neighbors(a);
    const auto& b = nbs[rng() % nbs.size()];
    auto trip = nni_triplet(a, b);
    CHECK(a.has_cluster(trip.a | trip.b));
    CHECK(!b.has_cluster(trip.a | trip.b));
    CHECK(b.has_cluster(trip.b | trip.c));
    CHECK(!a.has_cluster(trip.b | trip.c));
    CHECK(a.has_cluster(trip.p()));
    CHECK(b.has_cluster(trip.p()));
  }
}

TEST_CASE("nni_control identity and the worked 3-leaf case") {
  auto s = BinaryHierarchy::parse_newick("((1,2),3);");
  auto t = BinaryHierarchy::parse_newick("(1,(2,3));");
  CHECK(nni_control(s, s).empty());
  // K = J, (K_L, K_R) = ({1}, {2,3}), I = {1,2}, sibling {3} in K_R -> I_L.
  CHECK(nni_control(s, t) == Cluster::of({0}));
  CHECK(nni_move(s, nni_control(s, t)) == t);
}

TEST_CASE("nni_navigate: exhaustive termination, bound, and no cycles") {
  // Path-length bound (n-1)(n-2)/2: 1, 3, 6 for n = 3, 4, 5; attained.
  for (int n : {3, 4, 5}) {
    auto trees = all_trees(n);
    long bound = nni_path_bound(n);
    long longest = 0;
    for (const auto& from : trees) {
      for (const auto& to : trees) {
        auto path = nni_navigate(from, to);
        CHECK(path.front() == from);
        CHECK(path.back() == to);
        long moves = long(path.size()) - 1;
        CHECK(moves <= bound);
        longest = std::max(longest, moves);
        std::set<std::string> seen;
        for (std::size_t i = 0; i < path.size(); ++i) {
          CHECK(seen.insert(path[i].newick()).second);  // cycle-free
          if (i + 1 < path.size()) CHECK(nni_adjacent(path[i], path[i + 1]));
        }
      }
    }
    CHECK(longest == bound);
  }

  auto s = BinaryHierarchy::parse_newick("((1,2),3);");
  CHECK(nni_navigate(s, s).size() == 1);
}

TEST_CASE("control law moves are never longer than true shortest paths plus "
          "the bound (n = 4 spot check against BFS)") {
  auto trees = all_trees(4);
  for (const auto& from : trees) {
    auto dist = bfs_distances(from);
    for (const auto& to : trees) {
      long moves = long(nni_navigate(from, to).size()) - 1;
      CHECK(moves >= dist.at(to.newick()));
      CHECK(moves <= nni_path_bound(4));
    }
  }
}
