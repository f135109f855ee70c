#pragma once

// Constructive side of the distortion bounds.
//
// Lower bound: along a loop crossing curves with ratios ξ_1..ξ_m (extended
// m-periodically) there is an integer sequence t_j with
//
//     t_j / ξ_j ∈ N   and   0 <= t_j / ξ_j - t_{j-1} <= A,
//
// so t_{jm} >= t_0 w^j with w = ξ_1···ξ_m, while t_n <= e^{Dn + D}.
// build_witness produces the minimal such sequence and verify_witness
// re-checks every certificate in exact arithmetic.
//
// Upper bound: trace_bounds iterates the block- and torus-crossing
// recurrences at equality and compares the result with the two envelopes
// L'·n·Σ ε^i (always) and Λ·L'·n (trivial spirality).

#include <spiral/errors.hpp>
#include <spiral/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spiral {

struct XiPeriod {
  std::vector<Rational> ratios;

  std::size_t length() const { return ratios.size(); }
  /// ξ_j for j >= 1.
  const Rational& at(std::size_t j) const { return ratios[(j - 1) % ratios.size()]; }
  Rational weight() const {
    Rational w = 1;
    for (const auto& r : ratios) w *= r;
    return w;
  }
};

inline void check_period(const XiPeriod& p) {
  if (p.ratios.empty()) throw std::invalid_argument("period must be nonempty");
  for (const auto& r : p.ratios)
    if (r <= 0) throw std::invalid_argument("period ratios must be positive, got " + to_string(r));
}

struct WitnessSequence {
  XiPeriod period;
  Rational mu;
  std::vector<BigInt> t;  // t_0 .. t_n
  BigInt A;
  double D = 0;
  Rational w;
};

/// D with t_n <= e^{Dn + D} for every sequence obeying the step bound A.
/// With ε = max ξ_j: t_n <= ε^n (t_0 + Aε/(ε-1)) when ε > 1, and
/// t_n <= t_0 + nA otherwise.
inline double growth_constant(const BigInt& t0, const BigInt& A, const Rational& eps) {
  if (eps > 1) {
    Rational c = Rational(t0) + Rational(A) * eps / (eps - 1);
    return std::max({log(eps), log(c), 1.0});
  }
  return log(BigInt(t0 + A)) + 1.0;
}

inline WitnessSequence build_witness(const XiPeriod& period, const Rational& mu, std::size_t steps) {
  check_period(period);
  if (mu <= 0) throw std::invalid_argument("mu must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");

  WitnessSequence ws;
  ws.period = period;
  ws.mu = mu;
  ws.w = period.weight();
  ws.A = 1;
  for (const auto& r : period.ratios) ws.A = std::max(ws.A, denominator(r));

  ws.t.reserve(steps + 1);
  ws.t.push_back(ceil(mu));
  for (std::size_t j = 1; j <= steps; ++j) {
    const Rational& x = period.at(j);
    // Smallest multiple of p with t_j / ξ_j = q·ceil(t_{j-1}/q) >= t_{j-1}.
    ws.t.push_back(numerator(x) * ceil_div(ws.t.back(), denominator(x)));
  }
  Rational eps = *std::max_element(period.ratios.begin(), period.ratios.end());
  ws.D = growth_constant(ws.t.front(), ws.A, eps);
  return ws;
}

struct VerificationReport {
  bool start_above_mu = true;        // t_0 >= mu
  bool nonnegative_terms = true;     // t_j >= 0
  bool integral_quotients = true;    // t_j / ξ_j ∈ N for j >= 1
  bool step_bounds = true;           // 0 <= t_j/ξ_j - t_{j-1} <= A
  bool period_weight = true;         // w = ξ_1···ξ_m
  bool lower_growth = true;          // t_{jm} >= t_0 w^j
  bool upper_growth = true;          // log t_n <= Dn + D
  std::vector<std::string> failures;

  bool passed() const {
    return start_above_mu && nonnegative_terms && integral_quotients && step_bounds && period_weight &&
           lower_growth && upper_growth;
  }
};

inline VerificationReport verify_witness(const WitnessSequence& ws) {
  VerificationReport r;
  auto fail = [&](bool& flag, std::string msg) {
    if (flag) r.failures.push_back(std::move(msg));
    flag = false;
  };
  if (ws.period.ratios.empty() || ws.t.empty()) {
    fail(r.nonnegative_terms, "empty period or sequence");
    return r;
  }

  if (Rational(ws.t[0]) < ws.mu) fail(r.start_above_mu, "t_0 < mu");
  if (ws.period.weight() != ws.w) fail(r.period_weight, "w differs from the product of the period");

  for (std::size_t j = 0; j < ws.t.size(); ++j)
    if (ws.t[j] < 0) fail(r.nonnegative_terms, "t_" + std::to_string(j) + " < 0");

  for (std::size_t j = 1; j < ws.t.size(); ++j) {
    Rational quotient = Rational(ws.t[j]) / ws.period.at(j);
    if (!is_integral(quotient) || quotient < 0)
      fail(r.integral_quotients, "t_" + std::to_string(j) + "/xi_" + std::to_string(j) + " = " +
                                     to_string(quotient) + " is not a natural number");
    Rational diff = quotient - Rational(ws.t[j - 1]);
    if (diff < 0 || diff > Rational(ws.A))
      fail(r.step_bounds, "t_" + std::to_string(j) + "/xi - t_" + std::to_string(j - 1) + " = " +
                              to_string(diff) + " outside [0, A]");
  }

  const std::size_t m = ws.period.length();
  Rational bound = Rational(ws.t[0]);
  for (std::size_t j = 1; j * m < ws.t.size(); ++j) {
    bound *= ws.w;
    if (Rational(ws.t[j * m]) < bound)
      fail(r.lower_growth, "t_" + std::to_string(j * m) + " < t_0 w^" + std::to_string(j));
  }

  for (std::size_t n = 0; n < ws.t.size(); ++n) {
    double rhs = ws.D * static_cast<double>(n) + ws.D;
    if (log(ws.t[n]) > rhs * (1 + 1e-12))
      fail(r.upper_growth, "log t_" + std::to_string(n) + " exceeds Dn + D");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Crossing-bound tracer

struct Crossing {
  Rational xi = 1;
  Rational lambda_in = 1;   // lift length of the incoming degeneracy slope
  Rational lambda_out = 1;  // lift length of the outgoing degeneracy slope
  Rational step = 1;        // distance between consecutive crossing points
};

struct TraceConfig {
  std::vector<Crossing> crossings;
  Rational L_prime = 1;
  Rational rho = 1;
  std::optional<Rational> Lambda;
  std::optional<Rational> epsilon;  // defaults to the largest ξ^{±1} among the crossings
};

struct TraceReport {
  std::vector<Rational> a;       // bound on d(y_j, x_j)
  std::vector<Rational> b;       // bound on d(y_j, z_j)
  std::vector<Rational> claim2;  // L'·n·Σ_{i<=j} ε^i
  std::optional<Rational> claim3;  // Λ·L'·n
  std::vector<bool> within_claim2;
  std::vector<bool> within_claim3;
  Rational n = 0;  // Σ steps
  Rational epsilon = 1;
  double log_sum = -std::numeric_limits<double>::infinity();  // log Σ e^{a_j + b_j}
};

/// log Σ e^{x_j}, exact in the differences so huge exponents never overflow.
inline double log_sum_exp(const std::vector<Rational>& xs) {
  if (xs.empty()) return -std::numeric_limits<double>::infinity();
  const Rational& top = *std::max_element(xs.begin(), xs.end());
  double acc = 0;
  for (const auto& x : xs) acc += std::exp(to_double(x - top));
  return to_double(top) + std::log(acc);
}

inline TraceReport trace_bounds(const TraceConfig& cfg) {
  auto positive = [](const Rational& r, const char* what) {
    if (r <= 0) throw InconsistentConfig(std::string(what) + " must be positive");
  };
  positive(cfg.L_prime, "L_prime");
  positive(cfg.rho, "rho");
  if (cfg.Lambda) positive(*cfg.Lambda, "Lambda");
  if (cfg.epsilon) positive(*cfg.epsilon, "epsilon");

  TraceReport r;
  Rational max_xi = 1;
  for (const auto& c : cfg.crossings) {
    positive(c.xi, "xi");
    positive(c.lambda_in, "lambda_in");
    positive(c.lambda_out, "lambda_out");
    positive(c.step, "step");
    r.n += c.step;
    max_xi = std::max({max_xi, c.xi, reciprocal(c.xi)});
  }
  r.epsilon = cfg.epsilon.value_or(max_xi);
  if (r.epsilon < max_xi)
    throw InconsistentConfig("epsilon " + to_string(r.epsilon) + " is below the largest crossing ratio " +
                             to_string(max_xi));
  const Rational k = Rational(cfg.crossings.size());
  if (k * cfg.rho > r.n)
    throw InconsistentConfig("more crossings than n / rho allows");

  if (cfg.Lambda) r.claim3 = *cfg.Lambda * cfg.L_prime * r.n;
  Rational eps_power = 1, eps_sum = 0;
  std::vector<Rational> exponents;
  for (std::size_t j = 0; j < cfg.crossings.size(); ++j) {
    const Crossing& c = cfg.crossings[j];
    Rational a = cfg.L_prime * c.step;
    if (j > 0) a += c.lambda_in / cfg.crossings[j - 1].lambda_out * r.b.back();
    Rational b = c.xi * (c.lambda_out / c.lambda_in) * a;
    eps_power *= r.epsilon;
    eps_sum += eps_power;
    Rational claim2 = cfg.L_prime * r.n * eps_sum;

    r.within_claim2.push_back(b <= claim2);
    if (r.claim3) r.within_claim3.push_back(b <= *r.claim3);
    exponents.push_back(a + b);
    r.a.push_back(std::move(a));
    r.b.push_back(std::move(b));
    r.claim2.push_back(std::move(claim2));
  }
  r.log_sum = log_sum_exp(exponents);
  return r;
}

/// Least-squares line through (x, y) with its coefficient of determination.
struct LinearFit {
  double slope = 0, intercept = 0, r_squared = 0;
};

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

}  // namespace spiral
