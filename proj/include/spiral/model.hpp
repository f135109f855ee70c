#pragma once

// Combinatorial description of a clean surface in a non-geometric
// 3-manifold: the block graph of the manifold (blocks joined by JSJ tori)
// and the dual graph of the surface (pieces joined by curves, each curve
// carrying the covering degrees on its two sides).

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace spiral {

enum class Geometry { Seifert, Hyperbolic };

enum class PieceKind { Horizontal, Vertical, GeometricallyFinite, GeometricallyInfinite };

inline std::string_view to_string(Geometry g) { return g == Geometry::Seifert ? "seifert" : "hyperbolic"; }

inline std::string_view to_string(PieceKind k) {
  switch (k) {
    case PieceKind::Horizontal: return "horizontal";
    case PieceKind::Vertical: return "vertical";
    case PieceKind::GeometricallyFinite: return "geometrically_finite";
    case PieceKind::GeometricallyInfinite: return "geometrically_infinite";
  }
  return "horizontal";
}

inline std::optional<Geometry> parse_geometry(std::string_view s) {
  if (s == "seifert") return Geometry::Seifert;
  if (s == "hyperbolic") return Geometry::Hyperbolic;
  return std::nullopt;
}

inline std::optional<PieceKind> parse_piece_kind(std::string_view s) {
  for (auto k : {PieceKind::Horizontal, PieceKind::Vertical, PieceKind::GeometricallyFinite,
                 PieceKind::GeometricallyInfinite})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

/// Horizontal and geometrically infinite pieces make up the almost fiber part.
constexpr bool in_almost_fiber(PieceKind k) {
  return k == PieceKind::Horizontal || k == PieceKind::GeometricallyInfinite;
}

constexpr Geometry host_geometry(PieceKind k) {
  return (k == PieceKind::Horizontal || k == PieceKind::Vertical) ? Geometry::Seifert : Geometry::Hyperbolic;
}

struct Block {
  std::string id;
  Geometry geometry = Geometry::Seifert;
  friend bool operator==(const Block&, const Block&) = default;
};

/// block_a == block_b models a torus along which a block is glued to itself.
struct JsjTorus {
  std::string id;
  std::string block_a;
  std::string block_b;
  friend bool operator==(const JsjTorus&, const JsjTorus&) = default;
};

struct ManifoldGraph {
  std::vector<Block> blocks;
  std::vector<JsjTorus> tori;

  const Block* find_block(std::string_view id) const {
    auto it = std::find_if(blocks.begin(), blocks.end(), [&](const Block& b) { return b.id == id; });
    return it == blocks.end() ? nullptr : &*it;
  }
  const JsjTorus* find_torus(std::string_view id) const {
    auto it = std::find_if(tori.begin(), tori.end(), [&](const JsjTorus& t) { return t.id == id; });
    return it == tori.end() ? nullptr : &*it;
  }
  friend bool operator==(const ManifoldGraph&, const ManifoldGraph&) = default;
};

struct Piece {
  std::string id;
  std::string block;
  PieceKind kind = PieceKind::Horizontal;
  friend bool operator==(const Piece&, const Piece&) = default;
};

/// A curve of the surface on a JSJ torus. h_a (resp. h_b) is the covering
/// degree seen from piece_a (resp. piece_b); traversing the curve from
/// piece_a to piece_b multiplies by h_a / h_b.
struct Curve {
  std::string id;
  std::string piece_a;
  std::string piece_b;
  std::string torus;
  std::int64_t h_a = 1;
  std::int64_t h_b = 1;
  friend bool operator==(const Curve&, const Curve&) = default;
};

struct SurfaceGraph {
  std::vector<Piece> pieces;
  std::vector<Curve> curves;

  const Piece* find_piece(std::string_view id) const {
    auto it = std::find_if(pieces.begin(), pieces.end(), [&](const Piece& p) { return p.id == id; });
    return it == pieces.end() ? nullptr : &*it;
  }
  const Curve* find_curve(std::string_view id) const {
    auto it = std::find_if(curves.begin(), curves.end(), [&](const Curve& c) { return c.id == id; });
    return it == curves.end() ? nullptr : &*it;
  }
  friend bool operator==(const SurfaceGraph&, const SurfaceGraph&) = default;
};

/// Sorts every list by id; all reports are produced from this order.
inline void canonicalize(ManifoldGraph& m) {
  auto by_id = [](const auto& x, const auto& y) { return x.id < y.id; };
  std::stable_sort(m.blocks.begin(), m.blocks.end(), by_id);
  std::stable_sort(m.tori.begin(), m.tori.end(), by_id);
}

inline void canonicalize(SurfaceGraph& s) {
  auto by_id = [](const auto& x, const auto& y) { return x.id < y.id; };
  std::stable_sort(s.pieces.begin(), s.pieces.end(), by_id);
  std::stable_sort(s.curves.begin(), s.curves.end(), by_id);
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationCode {
  DuplicateId,
  DanglingReference,
  GeometryMismatch,
  TorusMismatch,
  NonPositiveDegree,
};

inline std::string_view to_string(ViolationCode c) {
  switch (c) {
    case ViolationCode::DuplicateId: return "DuplicateId";
    case ViolationCode::DanglingReference: return "DanglingReference";
    case ViolationCode::GeometryMismatch: return "GeometryMismatch";
    case ViolationCode::TorusMismatch: return "TorusMismatch";
    case ViolationCode::NonPositiveDegree: return "NonPositiveDegree";
  }
  return "?";
}

struct Violation {
  ViolationCode code;
  std::string id;      // offending block/torus/piece/curve id
  std::string detail;  // human-readable context

  friend auto operator<=>(const Violation& a, const Violation& b) {
    return std::tie(a.code, a.id, a.detail) <=> std::tie(b.code, b.id, b.detail);
  }
  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Sorted list of violations; empty means valid.
using ValidationReport = std::vector<Violation>;

namespace detail {

template <typename Items>
void report_duplicates(const Items& items, std::string_view what, ValidationReport& out) {
  std::map<std::string, int> seen;
  for (const auto& item : items)
    if (seen[item.id]++ > 0)
      out.push_back({ViolationCode::DuplicateId, item.id, "duplicate " + std::string(what) + " id"});
}

}  // namespace detail

inline ValidationReport validate(const ManifoldGraph& m, const SurfaceGraph& s) {
  ValidationReport out;
  detail::report_duplicates(m.blocks, "block", out);
  detail::report_duplicates(m.tori, "torus", out);
  detail::report_duplicates(s.pieces, "piece", out);
  detail::report_duplicates(s.curves, "curve", out);

  for (const auto& t : m.tori)
    for (const auto* ref : {&t.block_a, &t.block_b})
      if (!m.find_block(*ref))
        out.push_back({ViolationCode::DanglingReference, t.id, "unknown block '" + *ref + "'"});

  for (const auto& p : s.pieces) {
    const Block* b = m.find_block(p.block);
    if (!b) {
      out.push_back({ViolationCode::DanglingReference, p.id, "unknown block '" + p.block + "'"});
      continue;
    }
    if (host_geometry(p.kind) != b->geometry)
      out.push_back({ViolationCode::GeometryMismatch, p.id,
                     std::string(to_string(p.kind)) + " piece on " + std::string(to_string(b->geometry)) +
                         " block '" + b->id + "'"});
  }

  for (const auto& c : s.curves) {
    if (c.h_a < 1) out.push_back({ViolationCode::NonPositiveDegree, c.id, "h_a = " + std::to_string(c.h_a)});
    if (c.h_b < 1) out.push_back({ViolationCode::NonPositiveDegree, c.id, "h_b = " + std::to_string(c.h_b)});

    const Piece* pa = s.find_piece(c.piece_a);
    const Piece* pb = s.find_piece(c.piece_b);
    const JsjTorus* t = m.find_torus(c.torus);
    if (!pa) out.push_back({ViolationCode::DanglingReference, c.id, "unknown piece '" + c.piece_a + "'"});
    if (!pb) out.push_back({ViolationCode::DanglingReference, c.id, "unknown piece '" + c.piece_b + "'"});
    if (!t) out.push_back({ViolationCode::DanglingReference, c.id, "unknown torus '" + c.torus + "'"});
    if (!pa || !pb || !t) continue;

    bool joins = (t->block_a == pa->block && t->block_b == pb->block) ||
                 (t->block_a == pb->block && t->block_b == pa->block);
    if (!joins)
      out.push_back({ViolationCode::TorusMismatch, c.id,
                     "torus '" + t->id + "' does not join blocks '" + pa->block + "' and '" + pb->block + "'"});
  }

  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Almost fiber part

/// A connected component of the almost fiber part: the induced sub-multigraph
/// on horizontal and geometrically infinite pieces. Ids are sorted.
struct AFComponent {
  std::vector<std::string> pieces;
  std::vector<std::string> curves;
  friend bool operator==(const AFComponent&, const AFComponent&) = default;
};

inline std::vector<AFComponent> almost_fiber(const SurfaceGraph& s) {
  std::set<std::string> members;
  for (const auto& p : s.pieces)
    if (in_almost_fiber(p.kind)) members.insert(p.id);

  // Union-find over member pieces.
  std::map<std::string, std::string> parent;
  for (const auto& id : members) parent[id] = id;
  auto find = [&](std::string x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<const Curve*> inner;
  for (const auto& c : s.curves) {
    if (!members.count(c.piece_a) || !members.count(c.piece_b)) continue;
    inner.push_back(&c);
    auto ra = find(c.piece_a), rb = find(c.piece_b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::map<std::string, AFComponent> by_root;
  for (const auto& id : members) by_root[find(id)].pieces.push_back(id);
  for (const Curve* c : inner) by_root[find(c->piece_a)].curves.push_back(c->id);

  std::vector<AFComponent> out;
  for (auto& [root, comp] : by_root) {
    std::sort(comp.pieces.begin(), comp.pieces.end());
    std::sort(comp.curves.begin(), comp.curves.end());
    out.push_back(std::move(comp));
  }
  std::sort(out.begin(), out.end(),
            [](const AFComponent& a, const AFComponent& b) { return a.pieces.front() < b.pieces.front(); });
  return out;
}

inline bool has_geometrically_infinite(const SurfaceGraph& s, const AFComponent& c) {
  return std::any_of(c.pieces.begin(), c.pieces.end(), [&](const std::string& id) {
    const Piece* p = s.find_piece(id);
    return p && p->kind == PieceKind::GeometricallyInfinite;
  });
}

}  // namespace spiral
