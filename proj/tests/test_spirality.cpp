#include <spiral/spirality.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <random>

using namespace spiral;
using spiral::testing::Builder;
using spiral::testing::whole;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

DirectedCycle cyc(std::initializer_list<Traversal> ts) { return DirectedCycle{ts}; }

Document parallel_pair(std::int64_t ha1, std::int64_t hb1, std::int64_t ha2, std::int64_t hb2) {
  return Builder().horizontal("P").horizontal("Q").curve("e1", "P", "Q", ha1, hb1).curve("e2", "P", "Q", ha2, hb2).build();
}

}  // namespace

// ---------------------------------------------------------------- cycle_basis

TEST(CycleBasis, TreeHasNoCycles) {
  Document d = Builder().horizontal("P").horizontal("Q").curve("e", "P", "Q", 1, 1).build();
  EXPECT_TRUE(cycle_basis(d.surface, whole(d.surface)).empty());
}

TEST(CycleBasis, ParallelCurves) {
  Document d = parallel_pair(1, 1, 1, 1);
  auto basis = cycle_basis(d.surface, whole(d.surface));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], cyc({{"e1", true}, {"e2", false}}));
}

TEST(CycleBasis, LoopIsForward) {
  Document d = Builder().horizontal("P").curve("l", "P", "P", 1, 1).build();
  auto basis = cycle_basis(d.surface, whole(d.surface));
  ASSERT_EQ(basis.size(), 1u);
  EXPECT_EQ(basis[0], cyc({{"l", true}}));
}

TEST(CycleBasis, RankAndClosure) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    Document d = spiral::testing::random_instance(rng, 6, 10, 6, false);
    auto c = whole(d.surface);
    auto basis = cycle_basis(d.surface, c);
    EXPECT_EQ(basis.size(), c.curves.size() - c.pieces.size() + 1);
    for (const auto& g : basis) EXPECT_NO_THROW(check_cycle(d.surface, g));
    EXPECT_EQ(basis, cycle_basis(d.surface, c));  // deterministic
  }
}

// ---------------------------------------------------------------- weight

TEST(Weight, BacktrackIsOne) {
  Document d = parallel_pair(5, 3, 1, 1);
  EXPECT_EQ(weight(d.surface, cyc({{"e1", true}, {"e1", false}})), 1);
}

TEST(Weight, ParallelCurves) {
  Document d = parallel_pair(2, 1, 1, 1);
  EXPECT_EQ(weight(d.surface, cyc({{"e1", true}, {"e2", false}})), 2);
}

TEST(Weight, Loop) {
  Document d = Builder().gi("G").curve("l", "G", "G", 6, 2).build();
  EXPECT_EQ(weight(d.surface, cyc({{"l", true}})), 3);
}

TEST(Weight, RejectsBrokenWalks) {
  Document d = parallel_pair(2, 1, 1, 1);
  EXPECT_THROW(weight(d.surface, cyc({{"e1", true}, {"e2", true}})), InvalidCycle);
  EXPECT_THROW(weight(d.surface, cyc({{"nope", true}})), InvalidCycle);
  EXPECT_THROW(weight(d.surface, DirectedCycle{}), InvalidCycle);
}

TEST(Weight, HomomorphismProperties) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Document d = spiral::testing::random_instance(rng, 4, 7, 6, false);
    const auto& s = d.surface;
    auto c = whole(s);
    std::map<std::string, std::vector<DirectedCycle>> by_base;
    spiral::testing::for_each_closed_walk(s, c, 4, [&](const std::vector<const spiral::testing::Dart*>& w) {
      DirectedCycle g;
      for (const auto* x : w) g.edges.push_back({x->curve, x->forward});
      by_base[w.front()->from].push_back(std::move(g));
    });
    for (const auto& [base, walks] : by_base) {
      for (std::size_t i = 0; i < std::min<std::size_t>(walks.size(), 6); ++i) {
        const auto& g = walks[i];
        Rational wg = weight(s, g);
        EXPECT_EQ(weight(s, reversed(g)), reciprocal(wg));
        // Insert a back-tracking pair at every position.
        for (std::size_t pos = 0; pos <= g.edges.size(); ++pos) {
          DirectedCycle h = g;
          const std::string& at = pos < g.edges.size() ? vertices(s, g)[pos] : vertices(s, g)[0];
          for (const auto& id : c.curves) {
            const Curve* cv = s.find_curve(id);
            if (cv->piece_a != at && cv->piece_b != at) continue;
            bool fwd = cv->piece_a == at;
            h.edges.insert(h.edges.begin() + pos, {{id, fwd}, {id, !fwd}});
            break;
          }
          EXPECT_EQ(weight(s, h), wg);
        }
        for (std::size_t j = 0; j < std::min<std::size_t>(walks.size(), 6); ++j) {
          DirectedCycle cat = g;
          cat.edges.insert(cat.edges.end(), walks[j].edges.begin(), walks[j].edges.end());
          EXPECT_EQ(weight(s, cat), wg * weight(s, walks[j]));
        }
      }
    }
  }
}

// ---------------------------------------------------------------- spirality

TEST(Spirality, EqualDegreesAreTrivial) {
  Document d = parallel_pair(4, 4, 3, 3);
  auto h = spirality(d.surface, whole(d.surface));
  EXPECT_TRUE(h.trivial);
  EXPECT_TRUE(is_trivial(h));
}

TEST(Spirality, ParallelPairWeightTwo) {
  Document d = parallel_pair(2, 1, 1, 1);
  auto h = spirality(d.surface, whole(d.surface));
  EXPECT_FALSE(h.trivial);
  EXPECT_FALSE(is_trivial(h));
  ASSERT_EQ(h.basis.size(), 1u);
  EXPECT_EQ(h.basis[0].value, 2);
  EXPECT_EQ(h.basis[0].generator, "e2");
}

TEST(Spirality, TreeIsTrivial) {
  Document d = Builder().horizontal("A").horizontal("B").gi("C").curve("x", "A", "B", 3, 1).curve("y", "B", "C", 1, 5).build();
  auto h = spirality(d.surface, whole(d.surface));
  EXPECT_TRUE(h.trivial);
  EXPECT_TRUE(h.basis.empty());
}

TEST(Spirality, TrivialIffAllBasisValuesOne) {
  SpiralityHom h;
  h.basis = {{{}, 1, "a"}, {{}, 1, "b"}, {{}, 1, "c"}};
  h.trivial = true;
  EXPECT_TRUE(is_trivial(h));
}

TEST(Spirality, BasisIndependence) {
  // Re-derive w from random spanning trees: for a tree T with potential φ_T,
  // the fundamental cycle of a non-tree curve a->b has value ξ·φ_T(a)/φ_T(b),
  // and any closed walk's weight is the product of those values over the
  // non-tree curves it crosses (with sign).
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    Document d = spiral::testing::random_instance(rng, 4, 6, 4, trial % 2 == 0);
    const auto& s = d.surface;
    auto c = whole(s);
    bool reference = spirality(s, c).trivial;

    std::vector<std::vector<Traversal>> walks;
    spiral::testing::for_each_closed_walk(s, c, 8, [&](const std::vector<const spiral::testing::Dart*>& w) {
      std::vector<Traversal> t;
      for (const auto* x : w) t.push_back({x->curve, x->forward});
      walks.push_back(std::move(t));
    }, 4000);

    for (int tree_trial = 0; tree_trial < 10; ++tree_trial) {
      std::vector<std::string> curves = c.curves;
      std::shuffle(curves.begin(), curves.end(), rng);
      std::uniform_int_distribution<std::size_t> pick(0, c.pieces.size() - 1);
      std::string root = c.pieces[pick(rng)];
      std::map<std::string, Rational> phi{{root, 1}};
      std::set<std::string> tree;
      std::deque<std::string> queue{root};
      while (!queue.empty()) {
        std::string u = queue.front();
        queue.pop_front();
        for (const auto& id : curves) {
          const Curve* cv = s.find_curve(id);
          bool fwd = cv->piece_a == u;
          if (!fwd && cv->piece_b != u) continue;
          const std::string& v = head(*cv, fwd);
          if (phi.count(v)) continue;
          phi[v] = phi[u] * xi(*cv, fwd);
          tree.insert(id);
          queue.push_back(v);
        }
      }
      std::map<std::string, Rational> value;
      bool trivial = true;
      for (const auto& id : c.curves) {
        if (tree.count(id)) continue;
        const Curve* cv = s.find_curve(id);
        value[id] = xi(*cv, true) * phi[cv->piece_a] / phi[cv->piece_b];
        trivial = trivial && value[id] == 1;
      }
      EXPECT_EQ(trivial, reference);
      for (const auto& w : walks) {
        Rational via_basis = 1;
        for (const auto& t : w)
          if (value.count(t.curve)) via_basis *= t.forward ? value[t.curve] : reciprocal(value[t.curve]);
        ASSERT_EQ(via_basis, weight(s, DirectedCycle{w}));
      }
    }
  }
}

TEST(Spirality, NontrivialDetectionOracle) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    Document d = spiral::testing::random_instance(rng, 6, 10, 6, trial % 3 == 0);
    auto c = whole(d.surface);
    EXPECT_EQ(spirality(d.surface, c).trivial, spiral::testing::all_closed_walks_weight_one(d.surface, c, 10));
  }
}

TEST(Spirality, WeightRangeDpMatchesLiteralEnumeration) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    Document d = spiral::testing::random_instance(rng, 4, 6, 6, false);
    auto c = whole(d.surface);
    std::optional<std::pair<Rational, Rational>> brute;
    spiral::testing::for_each_closed_walk(d.surface, c, 5, [&](const std::vector<const spiral::testing::Dart*>& w) {
      Rational p = 1;
      for (const auto* x : w) p *= x->xi;
      if (!brute)
        brute = std::make_pair(p, p);
      else
        brute = std::make_pair(std::min(brute->first, p), std::max(brute->second, p));
    });
    EXPECT_EQ(brute, spiral::testing::closed_walk_weight_range(d.surface, c, 5));
  }
}

// ---------------------------------------------------------------- governor

TEST(Governor, Examples) {
  Document d = Builder().horizontal("P").horizontal("Q").curve("e", "P", "Q", 1, 2).build();
  EXPECT_EQ(governor(d.surface, whole(d.surface)), 2);
  EXPECT_EQ(governor(parallel_pair(3, 3, 5, 5).surface, whole(parallel_pair(3, 3, 5, 5).surface)), 1);
  Document loop = Builder().gi("G").curve("l", "G", "G", 6, 2).build();
  EXPECT_EQ(governor(loop.surface, whole(loop.surface)), 3);
  Document single = Builder().horizontal("P").build();
  EXPECT_EQ(governor(single.surface, whole(single.surface)), 1);
}

TEST(Governor, AtLeastOneWithEqualityIffAllRatiosOne) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Document d = spiral::testing::random_instance(rng, 5, 8, 3, false);
    auto c = whole(d.surface);
    Rational eps = governor(d.surface, c);
    bool all_one = std::all_of(d.surface.curves.begin(), d.surface.curves.end(),
                               [](const Curve& cv) { return cv.h_a == cv.h_b; });
    EXPECT_GE(eps, 1);
    EXPECT_EQ(eps == 1, all_one);
  }
}

// ---------------------------------------------------------------- potential

TEST(Potential, TwoPieces) {
  Document d = Builder().horizontal("u").horizontal("v").curve("e", "u", "v", 3, 2).build();
  auto phi = vertex_potential(d.surface, whole(d.surface));
  EXPECT_EQ(phi.root, "u");
  EXPECT_EQ(phi.values.at("u"), 1);
  EXPECT_EQ(phi.values.at("v"), R(3, 2));
}

TEST(Potential, SinglePiece) {
  Document d = Builder().horizontal("u").build();
  auto phi = vertex_potential(d.surface, whole(d.surface));
  ASSERT_EQ(phi.values.size(), 1u);
  EXPECT_EQ(phi.values.at("u"), 1);
}

TEST(Potential, NontrivialThrows) {
  Document d = parallel_pair(2, 1, 1, 1);
  EXPECT_THROW(vertex_potential(d.surface, whole(d.surface)), NonTrivialSpirality);
  EXPECT_THROW(lambda_bound(d.surface, whole(d.surface)), NonTrivialSpirality);
}

TEST(Potential, ConsistentOnEveryCurve) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Document d = spiral::testing::random_instance(rng, 6, 10, 6, true);
    auto c = whole(d.surface);
    auto phi = vertex_potential(d.surface, c);
    for (const auto& id : c.curves) {
      const Curve* cv = d.surface.find_curve(id);
      for (bool fwd : {true, false})
        EXPECT_EQ(xi(*cv, fwd), phi.values.at(head(*cv, fwd)) / phi.values.at(tail(*cv, fwd)));
    }
  }
}

// ---------------------------------------------------------------- Lambda

TEST(Lambda, PathUpAndDown) {
  Document d = Builder().horizontal("u").horizontal("v").horizontal("w").curve("e1", "u", "v", 2, 1).curve("e2", "v", "w", 1, 2).build();
  auto c = whole(d.surface);
  EXPECT_EQ(lambda_bound(d.surface, c), 2);
  EXPECT_EQ(lambda_by_enumeration(d.surface, c, 6), 2);
  EXPECT_EQ(spiral::testing::brute_force_lambda(d.surface, c, 6), 2);
}

TEST(Lambda, SinglePiece) {
  Document d = Builder().horizontal("u").build();
  EXPECT_EQ(lambda_bound(d.surface, whole(d.surface)), 1);
  EXPECT_EQ(lambda_by_enumeration(d.surface, whole(d.surface), 4), 1);
}

TEST(Lambda, BalancedLoop) {
  Document d = Builder().horizontal("u").curve("l", "u", "u", 1, 1).build();
  EXPECT_EQ(lambda_by_enumeration(d.surface, whole(d.surface), 4), 1);
}

TEST(Lambda, TwoPieces) {
  Document d = Builder().horizontal("u").horizontal("v").curve("e", "u", "v", 3, 2).build();
  auto c = whole(d.surface);
  EXPECT_EQ(lambda_bound(d.surface, c), R(3, 2));
  EXPECT_EQ(lambda_by_enumeration(d.surface, c, 2), R(3, 2));
  EXPECT_EQ(lambda_by_enumeration(d.surface, c, 1), 1);  // no closed walk of length 1
}

TEST(Lambda, DpAgreesWithLiteralEnumeration) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 150; ++trial) {
    Document d = spiral::testing::random_instance(rng, 4, 5, 6, trial % 2 == 0);
    auto c = whole(d.surface);
    for (std::size_t len : {1u, 2u, 3u, 5u})
      ASSERT_EQ(lambda_by_enumeration(d.surface, c, len), spiral::testing::brute_force_lambda(d.surface, c, len))
          << "trial " << trial << " len " << len;
  }
}

TEST(Lambda, OracleAgreement) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    Document d = spiral::testing::random_instance(rng, 6, 10, 6, true);
    auto c = whole(d.surface);
    EXPECT_EQ(lambda_by_enumeration(d.surface, c, 2 * c.curves.size()), lambda_bound(d.surface, c));
  }
}

// ---------------------------------------------------------------- supercritical

TEST(Supercritical, SplicesDetourToGiPiece) {
  Document d = Builder()
                   .horizontal("A")
                   .horizontal("B")
                   .horizontal("C")
                   .gi("G")
                   .curve("a1", "A", "B", 2, 1)
                   .curve("a2", "B", "C", 1, 1)
                   .curve("a3", "C", "A", 1, 1)
                   .curve("g", "A", "G", 1, 1)
                   .build();
  const auto& s = d.surface;
  auto gamma = supercritical_cycle_through_gi(s, whole(s));
  EXPECT_EQ(gamma.edges.size(), 5u);
  EXPECT_EQ(weight(s, gamma), 2);
  auto vs = vertices(s, gamma);
  EXPECT_NE(std::find(vs.begin(), vs.end(), "G"), vs.end());
}

TEST(Supercritical, CycleAlreadyThroughGi) {
  Document d = Builder().gi("G").horizontal("H").curve("e1", "G", "H", 2, 1).curve("e2", "G", "H", 1, 1).build();
  const auto& s = d.surface;
  auto gamma = supercritical_cycle_through_gi(s, whole(s));
  EXPECT_EQ(gamma, cyc({{"e1", true}, {"e2", false}}));
  EXPECT_EQ(weight(s, gamma), 2);
}

TEST(Supercritical, InvertsWeightBelowOne) {
  Document d = Builder().gi("G").curve("l", "G", "G", 1, 3).build();
  auto gamma = supercritical_cycle_through_gi(d.surface, whole(d.surface));
  EXPECT_EQ(gamma, cyc({{"l", false}}));
  EXPECT_EQ(weight(d.surface, gamma), 3);
}

TEST(Supercritical, PicksStrongestBasisCycle) {
  Document d = Builder().gi("G").curve("l1", "G", "G", 2, 1).curve("l2", "G", "G", 1, 5).curve("l3", "G", "G", 5, 1).build();
  auto gamma = supercritical_cycle_through_gi(d.surface, whole(d.surface));
  EXPECT_EQ(gamma, cyc({{"l2", false}}));  // |log 1/5| ties |log 5|; l2 < l3
}

TEST(Supercritical, Errors) {
  Document trivial = Builder().gi("G").curve("l", "G", "G", 2, 2).build();
  EXPECT_THROW(supercritical_cycle_through_gi(trivial.surface, whole(trivial.surface)), NoSupercriticalCycle);
  Document no_gi = parallel_pair(2, 1, 1, 1);
  EXPECT_THROW(supercritical_cycle_through_gi(no_gi.surface, whole(no_gi.surface)), NoGeometricallyInfinitePiece);
}

TEST(Supercritical, RandomInstances) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Document d = spiral::testing::random_instance(rng, 6, 10, 6, false, 0.25);
    const auto& s = d.surface;
    auto c = whole(s);
    if (spirality(s, c).trivial || !has_geometrically_infinite(s, c)) continue;
    auto gamma = supercritical_cycle_through_gi(s, c);
    EXPECT_GT(weight(s, gamma), 1);
    auto vs = vertices(s, gamma);
    EXPECT_TRUE(std::any_of(vs.begin(), vs.end(), [&](const std::string& id) {
      return s.find_piece(id)->kind == PieceKind::GeometricallyInfinite;
    }));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}
