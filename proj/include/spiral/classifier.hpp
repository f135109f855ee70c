#pragma once

// Distortion class of a clean surface subgroup, component by component and
// for the whole surface.

#include <spiral/errors.hpp>
#include <spiral/growth.hpp>
#include <spiral/model.hpp>
#include <spiral/spirality.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace spiral {

struct ComponentVerdict {
  AFComponent component;
  bool has_gi = false;
  std::size_t piece_count = 0;
  bool separable = true;
  GrowthClass distortion = GrowthClass::Linear;
};

struct ClassificationReport {
  std::vector<ComponentVerdict> components;
  bool surface_separable = true;
  GrowthClass overall = GrowthClass::Linear;
  GrowthClass lower = GrowthClass::Linear;
  GrowthClass upper = GrowthClass::Linear;
};

/// Validation failed; the report lists every violation.
struct InvalidInput : Error {
  explicit InvalidInput(ValidationReport r)
      : Error("input violates " + std::to_string(r.size()) + " invariant(s)"), report(std::move(r)) {}
  ValidationReport report;
};

/// Decision table:
///   geometrically infinite piece present: double exponential if w is
///   nontrivial, exponential otherwise;
///   only horizontal pieces, at least two: exponential if w is nontrivial,
///   quadratic otherwise;
///   a single horizontal piece: linear.
inline ComponentVerdict classify_component(const SurfaceGraph& s, const AFComponent& c) {
  ComponentVerdict v;
  v.component = c;
  v.has_gi = has_geometrically_infinite(s, c);
  v.piece_count = c.pieces.size();
  v.separable = is_trivial(spirality(s, c));
  if (v.has_gi)
    v.distortion = v.separable ? GrowthClass::Exponential : GrowthClass::DoubleExponential;
  else if (v.piece_count >= 2)
    v.distortion = v.separable ? GrowthClass::Quadratic : GrowthClass::Exponential;
  else
    v.distortion = GrowthClass::Linear;
  return v;
}

inline ClassificationReport classify_surface(const ManifoldGraph& m, const SurfaceGraph& s) {
  if (auto violations = validate(m, s); !violations.empty()) throw InvalidInput(std::move(violations));
  ClassificationReport r;
  r.overall = zero_function_class();
  for (const auto& c : almost_fiber(s)) {
    r.components.push_back(classify_component(s, c));
    r.overall = join(r.overall, r.components.back().distortion);
    r.surface_separable = r.surface_separable && r.components.back().separable;
  }
  // The distortion is sandwiched between the join and its superadditive
  // closure, which agree on every class.
  r.lower = r.overall;
  r.upper = superadditive_closure(r.overall);
  return r;
}

}  // namespace spiral
