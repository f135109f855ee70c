#pragma once

// The spirality homomorphism w on the first homology of an almost fiber
// component, evaluated exactly on a fundamental cycle basis, plus the
// quantities derived from it: the governor, the vertex potential that
// witnesses triviality, the uniform partial-product bound Λ, and a
// supercritical closed walk through a geometrically infinite piece.

#include <spiral/errors.hpp>
#include <spiral/model.hpp>
#include <spiral/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spiral {

/// One curve crossed in a given direction. Forward goes piece_a -> piece_b.
struct Traversal {
  std::string curve;
  bool forward = true;
  friend bool operator==(const Traversal&, const Traversal&) = default;
};

/// A closed walk in the dual graph, listed as consecutive traversals.
struct DirectedCycle {
  std::vector<Traversal> edges;
  friend bool operator==(const DirectedCycle&, const DirectedCycle&) = default;
};

inline Rational xi(const Curve& c, bool forward) {
  return forward ? make_rational(c.h_a, c.h_b) : make_rational(c.h_b, c.h_a);
}

inline const std::string& tail(const Curve& c, bool forward) { return forward ? c.piece_a : c.piece_b; }
inline const std::string& head(const Curve& c, bool forward) { return forward ? c.piece_b : c.piece_a; }

inline DirectedCycle reversed(const DirectedCycle& g) {
  DirectedCycle r;
  for (auto it = g.edges.rbegin(); it != g.edges.rend(); ++it) r.edges.push_back({it->curve, !it->forward});
  return r;
}

/// Throws InvalidCycle unless every curve exists and the walk closes up.
inline void check_cycle(const SurfaceGraph& s, const DirectedCycle& g) {
  if (g.edges.empty()) throw InvalidCycle("cycle has no edges");
  std::vector<const Curve*> cs;
  for (const auto& t : g.edges) {
    const Curve* c = s.find_curve(t.curve);
    if (!c) throw InvalidCycle("unknown curve '" + t.curve + "'");
    cs.push_back(c);
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    std::size_t j = (i + 1) % cs.size();
    if (head(*cs[i], g.edges[i].forward) != tail(*cs[j], g.edges[j].forward))
      throw InvalidCycle("walk breaks between '" + g.edges[i].curve + "' and '" + g.edges[j].curve + "'");
  }
}

/// Pieces visited, starting from the tail of the first edge.
inline std::vector<std::string> vertices(const SurfaceGraph& s, const DirectedCycle& g) {
  std::vector<std::string> out;
  for (const auto& t : g.edges) out.push_back(tail(*s.find_curve(t.curve), t.forward));
  return out;
}

/// Exact product of ξ along the walk.
inline Rational weight(const SurfaceGraph& s, const DirectedCycle& g) {
  check_cycle(s, g);
  Rational w = 1;
  for (const auto& t : g.edges) w *= xi(*s.find_curve(t.curve), t.forward);
  return w;
}

namespace detail {

/// Spanning tree of a component: breadth first from the smallest piece id,
/// incident curves scanned in sorted curve-id order.
struct SpanningTree {
  std::string root;
  std::map<std::string, std::pair<const Curve*, std::string>> parent;  // child -> (curve, parent piece)
  std::map<std::string, std::size_t> depth;
  std::vector<std::string> order;  // BFS visiting order
  std::vector<const Curve*> non_tree;

  // Traversals from `from` up to its ancestor `to`.
  std::vector<Traversal> up(std::string from, const std::string& to) const {
    std::vector<Traversal> out;
    while (from != to) {
      const auto& [c, p] = parent.at(from);
      out.push_back({c->id, c->piece_a == from});
      from = p;
    }
    return out;
  }

  std::vector<Traversal> path(const std::string& a, const std::string& b) const {
    std::string x = a, y = b;
    while (depth.at(x) > depth.at(y)) x = parent.at(x).second;
    while (depth.at(y) > depth.at(x)) y = parent.at(y).second;
    while (x != y) {
      x = parent.at(x).second;
      y = parent.at(y).second;
    }
    auto out = up(a, x);
    auto down = up(b, x);
    for (auto it = down.rbegin(); it != down.rend(); ++it) out.push_back({it->curve, !it->forward});
    return out;
  }
};

inline std::map<std::string, std::vector<const Curve*>> incidence(const SurfaceGraph& s, const AFComponent& c) {
  std::map<std::string, std::vector<const Curve*>> adj;
  for (const auto& p : c.pieces) adj[p];
  for (const auto& id : c.curves) {
    const Curve* cv = s.find_curve(id);
    adj[cv->piece_a].push_back(cv);
    if (cv->piece_b != cv->piece_a) adj[cv->piece_b].push_back(cv);
  }
  return adj;
}

inline SpanningTree spanning_tree(const SurfaceGraph& s, const AFComponent& c) {
  SpanningTree t;
  if (c.pieces.empty()) return t;
  auto adj = incidence(s, c);
  std::map<std::string, bool> used;
  t.root = c.pieces.front();
  t.depth[t.root] = 0;
  std::deque<std::string> queue{t.root};
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    t.order.push_back(u);
    for (const Curve* cv : adj[u]) {
      if (cv->piece_a == cv->piece_b) continue;
      const std::string& v = cv->piece_a == u ? cv->piece_b : cv->piece_a;
      if (t.depth.count(v)) continue;
      t.depth[v] = t.depth[u] + 1;
      t.parent[v] = {cv, u};
      used[cv->id] = true;
      queue.push_back(v);
    }
  }
  for (const auto& id : c.curves)
    if (!used[id]) t.non_tree.push_back(s.find_curve(id));
  return t;
}

}  // namespace detail

/// Fundamental cycle of every non-tree curve, in sorted curve-id order. For a
/// curve from a to b the cycle follows the tree from a to b and returns along
/// the curve; a loop curve is its own cycle, traversed forward.
inline std::vector<DirectedCycle> cycle_basis(const SurfaceGraph& s, const AFComponent& c) {
  auto tree = detail::spanning_tree(s, c);
  std::vector<DirectedCycle> out;
  for (const Curve* cv : tree.non_tree) {
    DirectedCycle g;
    if (cv->piece_a == cv->piece_b) {
      g.edges.push_back({cv->id, true});
    } else {
      g.edges = tree.path(cv->piece_a, cv->piece_b);
      g.edges.push_back({cv->id, false});
    }
    out.push_back(std::move(g));
  }
  return out;
}

struct BasisCycle {
  DirectedCycle cycle;
  Rational value;
  std::string generator;  // the non-tree curve this cycle is dual to
};

struct SpiralityHom {
  AFComponent component;
  std::vector<BasisCycle> basis;
  bool trivial = true;
};

inline SpiralityHom spirality(const SurfaceGraph& s, const AFComponent& c) {
  SpiralityHom h;
  h.component = c;
  auto tree = detail::spanning_tree(s, c);
  auto cycles = cycle_basis(s, c);
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    Rational w = weight(s, cycles[i]);
    if (w != 1) h.trivial = false;
    h.basis.push_back({std::move(cycles[i]), w, tree.non_tree[i]->id});
  }
  return h;
}

/// Separability verdict for the component's subgroup.
inline bool is_trivial(const SpiralityHom& h) { return h.trivial; }

/// Largest ξ over both orientations of every curve in the component (1 if none).
inline Rational governor(const SurfaceGraph& s, const AFComponent& c) {
  Rational eps = 1;
  for (const auto& id : c.curves) {
    const Curve* cv = s.find_curve(id);
    eps = std::max({eps, xi(*cv, true), xi(*cv, false)});
  }
  return eps;
}

/// φ with ξ(e) = φ(head e) / φ(tail e) on every directed curve, φ(root) = 1.
struct Potential {
  std::string root;
  std::map<std::string, Rational> values;
};

inline Potential vertex_potential(const SurfaceGraph& s, const AFComponent& c) {
  if (!spirality(s, c).trivial)
    throw NonTrivialSpirality("spirality is not trivial; no potential exists");
  auto tree = detail::spanning_tree(s, c);
  Potential phi;
  phi.root = tree.root;
  if (c.pieces.empty()) return phi;
  phi.values[tree.root] = 1;
  for (const auto& v : tree.order) {
    if (v == tree.root) continue;
    const auto& [cv, u] = tree.parent.at(v);
    phi.values[v] = phi.values.at(u) * xi(*cv, cv->piece_a == u);
  }
  return phi;
}

/// max φ / min φ: the supremum of partial products of ξ along closed walks.
inline Rational lambda_bound(const SurfaceGraph& s, const AFComponent& c) {
  auto phi = vertex_potential(s, c);
  if (phi.values.empty()) return 1;
  auto [lo, hi] = std::minmax_element(phi.values.begin(), phi.values.end(),
                                      [](const auto& a, const auto& b) { return a.second < b.second; });
  return hi->second / lo->second;
}

/// Maximum partial product ∏_{i=j..k} ξ over all closed walks of length at
/// most max_len, computed exhaustively by dynamic programming over walks.
/// A partial product of a closed walk is, after rotating the walk, a segment
/// u -> v followed by some return walk v -> u; both are tabulated by length.
/// Returns 1 when there are no closed walks.
inline Rational lambda_by_enumeration(const SurfaceGraph& s, const AFComponent& c, std::size_t max_len) {
  const std::size_t n = c.pieces.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[c.pieces[i]] = i;
  struct Dart {
    std::size_t from, to;
    Rational xi;
  };
  std::vector<Dart> darts;
  for (const auto& id : c.curves) {
    const Curve* cv = s.find_curve(id);
    for (bool fwd : {true, false})
      darts.push_back({index.at(tail(*cv, fwd)), index.at(head(*cv, fwd)), xi(*cv, fwd)});
  }

  using Table = std::vector<std::vector<std::optional<Rational>>>;
  // best[l][u][v]: largest product of a walk of exactly l steps from u to v.
  std::vector<Table> best(max_len + 1, Table(n, std::vector<std::optional<Rational>>(n)));
  for (std::size_t u = 0; u < n; ++u) best[0][u][u] = Rational(1);
  for (std::size_t l = 1; l <= max_len; ++l)
    for (std::size_t u = 0; u < n; ++u)
      for (const auto& d : darts) {
        const auto& prev = best[l - 1][u][d.from];
        if (!prev) continue;
        Rational cand = *prev * d.xi;
        auto& slot = best[l][u][d.to];
        if (!slot || cand > *slot) slot = cand;
      }

  std::optional<Rational> answer;
  for (std::size_t seg = 1; seg <= max_len; ++seg)
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v) {
        const auto& p = best[seg][u][v];
        if (!p) continue;
        bool closes = false;
        for (std::size_t back = 0; back + seg <= max_len && !closes; ++back) closes = best[back][v][u].has_value();
        if (closes && (!answer || *p > *answer)) answer = *p;
      }
  return answer.value_or(Rational(1));
}

/// A closed walk of weight > 1 through a geometrically infinite piece. Starts
/// from the basis cycle with the largest |log w| (ties: smallest generating
/// curve id), inverted if w < 1, and splices in a back-and-forth detour to the
/// nearest geometrically infinite piece when the cycle misses all of them.
inline DirectedCycle supercritical_cycle_through_gi(const SurfaceGraph& s, const AFComponent& c) {
  auto h = spirality(s, c);
  if (h.trivial) throw NoSupercriticalCycle("spirality is trivial; every closed walk has weight 1");
  if (!has_geometrically_infinite(s, c))
    throw NoGeometricallyInfinitePiece("component has no geometrically infinite piece");

  const BasisCycle* pick = nullptr;
  Rational pick_strength;
  for (const auto& b : h.basis) {
    if (b.value == 1) continue;
    Rational strength = std::max(b.value, reciprocal(b.value));
    if (!pick || strength > pick_strength || (strength == pick_strength && b.generator < pick->generator)) {
      pick = &b;
      pick_strength = strength;
    }
  }
  DirectedCycle alpha = pick->value > 1 ? pick->cycle : reversed(pick->cycle);

  auto is_gi = [&](const std::string& id) { return s.find_piece(id)->kind == PieceKind::GeometricallyInfinite; };
  auto on_alpha = vertices(s, alpha);
  if (std::any_of(on_alpha.begin(), on_alpha.end(), is_gi)) return alpha;

  // Multi-source BFS from the cycle's pieces, in walk order.
  auto adj = detail::incidence(s, c);
  std::map<std::string, std::pair<const Curve*, std::string>> came_from;
  std::map<std::string, std::string> source;
  std::deque<std::string> queue;
  for (const auto& v : on_alpha)
    if (!source.count(v)) {
      source[v] = v;
      queue.push_back(v);
    }
  std::string target;
  while (!queue.empty() && target.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const Curve* cv : adj[u]) {
      const std::string& v = cv->piece_a == u ? cv->piece_b : cv->piece_a;
      if (source.count(v)) continue;
      source[v] = source[u];
      came_from[v] = {cv, u};
      if (is_gi(v)) {
        target = v;
        break;
      }
      queue.push_back(v);
    }
  }

  std::vector<Traversal> detour;  // from the attachment vertex out to the GI piece
  for (std::string v = target; came_from.count(v); v = came_from[v].second) {
    const auto& [cv, u] = came_from[v];
    detour.push_back({cv->id, cv->piece_a == u});
  }
  std::reverse(detour.begin(), detour.end());
  std::vector<Traversal> back;
  for (auto it = detour.rbegin(); it != detour.rend(); ++it) back.push_back({it->curve, !it->forward});

  const std::string& anchor = source[target];
  auto at = std::find(on_alpha.begin(), on_alpha.end(), anchor) - on_alpha.begin();
  DirectedCycle gamma;
  gamma.edges.assign(alpha.edges.begin(), alpha.edges.begin() + at);
  gamma.edges.insert(gamma.edges.end(), detour.begin(), detour.end());
  gamma.edges.insert(gamma.edges.end(), back.begin(), back.end());
  gamma.edges.insert(gamma.edges.end(), alpha.edges.begin() + at, alpha.edges.end());
  return gamma;
}

}  // namespace spiral
