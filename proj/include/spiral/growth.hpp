#pragma once

// The four growth classes a surface subgroup distortion can take, ordered by
// domination, together with numeric representatives for sanity checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace spiral {

enum class GrowthClass { Linear = 0, Quadratic = 1, Exponential = 2, DoubleExponential = 3 };

inline constexpr std::array<GrowthClass, 4> kAllGrowthClasses = {
    GrowthClass::Linear, GrowthClass::Quadratic, GrowthClass::Exponential,
    GrowthClass::DoubleExponential};

constexpr int rank(GrowthClass f) { return static_cast<int>(f); }

/// f ⪯ g: there are constants A..E >= 0 (A, B > 0) with f(n) <= A g(Bn + C) + Dn + E.
constexpr bool dominates(GrowthClass f, GrowthClass g) { return rank(f) <= rank(g); }

constexpr bool equivalent(GrowthClass f, GrowthClass g) { return dominates(f, g) && dominates(g, f); }

constexpr GrowthClass join(GrowthClass f, GrowthClass g) { return dominates(f, g) ? g : f; }

/// Each class contains a superadditive representative, so the closure is the class itself.
constexpr GrowthClass superadditive_closure(GrowthClass f) { return f; }

/// The zero function (no almost-fiber components) is linear by convention.
constexpr GrowthClass zero_function_class() { return GrowthClass::Linear; }

inline std::string_view to_string(GrowthClass f) {
  switch (f) {
    case GrowthClass::Linear: return "linear";
    case GrowthClass::Quadratic: return "quadratic";
    case GrowthClass::Exponential: return "exponential";
    case GrowthClass::DoubleExponential: return "double_exponential";
  }
  return "linear";
}

inline std::optional<GrowthClass> parse_growth_class(std::string_view s) {
  for (GrowthClass f : kAllGrowthClasses)
    if (to_string(f) == s) return f;
  return std::nullopt;
}

/// exp applied `height` times to `top`. Height 0 is an ordinary number.
struct Tower {
  int height = 0;
  double top = 0.0;

  friend bool operator==(const Tower&, const Tower&) = default;

  /// Native value; +inf when out of range.
  double value() const {
    double v = top;
    for (int i = 0; i < height; ++i) v = std::exp(v);
    return v;
  }
};

/// Orders two positive tower values by peeling matching exponentials first.
inline std::partial_ordering compare(Tower a, Tower b) {
  while (a.height > 0 && b.height > 0) {
    --a.height;
    --b.height;
  }
  return a.value() <=> b.value();
}

/// A·g + lin for A >= 1, lin >= 0, staying in tower form when g is one.
inline Tower scale_add(double A, Tower g, double lin) {
  if (g.height == 0) return {0, A * g.top + lin};
  double log_a = std::log(A);
  double inner = g.height == 1 ? g.top : std::exp(g.top);
  if (g.height > 2 || !std::isfinite(inner)) {
    // log(A·g) = log A + log g with log g overflowing; the additive terms vanish.
    return g;
  }
  double ln = log_a + inner;
  if (lin > 0) ln += std::log1p(lin * std::exp(-ln));
  return {1, ln};
}

/// n, n², eⁿ, e^{eⁿ}. Exponential switches to tower form once eⁿ overflows;
/// DoubleExponential is always reported as the tower (2, n).
inline Tower representative(GrowthClass f, long long n) {
  if (n < 1) throw std::invalid_argument("representative: n must be >= 1");
  double x = static_cast<double>(n);
  switch (f) {
    case GrowthClass::Linear: return {0, x};
    case GrowthClass::Quadratic: return {0, x * x};
    case GrowthClass::Exponential:
      return x <= 700.0 ? Tower{0, std::exp(x)} : Tower{1, x};
    case GrowthClass::DoubleExponential: return {2, x};
  }
  return {0, x};
}

/// Constants certifying f ⪯ g: f(n) <= A g(Bn + C) + Dn + E.
struct DominationConstants {
  double A = 1, B = 1, C = 0, D = 0, E = 0;
};

/// Certificate for a dominating pair, nullopt when f does not dominate into g.
inline std::optional<DominationConstants> domination_constants(GrowthClass f, GrowthClass g) {
  if (!dominates(f, g)) return std::nullopt;
  // n <= n² <= eⁿ <= e^{eⁿ} for n >= 1, so the identity constants suffice.
  return DominationConstants{};
}

/// Checks f(n) <= A g(Bn + C) + Dn + E at a single n in tower arithmetic.
inline bool certificate_holds(GrowthClass f, GrowthClass g, const DominationConstants& k, long long n) {
  long long m = static_cast<long long>(std::llround(k.B * static_cast<double>(n) + k.C));
  Tower lhs = representative(f, n);
  Tower rhs = scale_add(k.A, representative(g, std::max(1LL, m)), k.D * static_cast<double>(n) + k.E);
  return compare(lhs, rhs) != std::partial_ordering::greater;
}

}  // namespace spiral
