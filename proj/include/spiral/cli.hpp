#pragma once

// Subcommands of the `spiral` tool. Each takes the raw input bytes and
// returns the text to print plus the exit status, so the tool itself is a
// thin argument parser and everything here is testable in-process.
//
// Exit status: 0 ok, 1 validation failure, 2 parse failure, 3 precondition
// failure.

#include <spiral/classifier.hpp>
#include <spiral/document.hpp>
#include <spiral/dot.hpp>
#include <spiral/errors.hpp>
#include <spiral/growth.hpp>
#include <spiral/model.hpp>
#include <spiral/spirality.hpp>
#include <spiral/witness.hpp>

#include <json.hpp>

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace spiral::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kParseFailure = 2, kPreconditionFailure = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::string out;
  std::string err;
};

enum class Format { Text, Json };

/// "c1:fwd,c2:rev" (orientation defaults to fwd). Throws std::invalid_argument.
inline DirectedCycle parse_cycle(std::string_view spec) {
  DirectedCycle g;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    std::string_view item = spec.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (item.empty()) throw std::invalid_argument("empty edge in cycle '" + std::string(spec) + "'");
    Traversal t;
    if (auto colon = item.rfind(':'); colon != std::string_view::npos) {
      std::string_view dir = item.substr(colon + 1);
      if (dir == "fwd")
        t.forward = true;
      else if (dir == "rev")
        t.forward = false;
      else
        throw std::invalid_argument("orientation must be fwd or rev, got '" + std::string(dir) + "'");
      item = item.substr(0, colon);
    }
    if (item.empty()) throw std::invalid_argument("missing curve id in cycle '" + std::string(spec) + "'");
    t.curve = std::string(item);
    g.edges.push_back(std::move(t));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return g;
}

inline std::string format_cycle(const DirectedCycle& g) {
  std::string out;
  for (const auto& t : g.edges) {
    if (!out.empty()) out += ',';
    out += t.curve + (t.forward ? ":fwd" : ":rev");
  }
  return out;
}

namespace detail {

inline std::string join_ids(const std::vector<std::string>& ids, std::string_view sep = ",") {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += sep;
    out += id;
  }
  return out;
}

inline CommandResult parse_failure(const ParseError& e, Format format = Format::Text) {
  CommandResult r;
  r.exit_code = kParseFailure;
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["error"] = {{"kind", std::string(to_string(e.kind))}, {"location", e.location}, {"message", e.what()}};
    r.out = j.dump(2) + "\n";
  }
  r.err = std::string("parse error: ") + e.what() + "\n";
  return r;
}

inline CommandResult validation_failure(const ValidationReport& v, Format format = Format::Text) {
  CommandResult r;
  r.exit_code = kValidationFailure;
  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["valid"] = false;
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& x : v)
      j["violations"].push_back({{"code", std::string(to_string(x.code))}, {"id", x.id}, {"detail", x.detail}});
    r.out = j.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "invalid: " << v.size() << " violation(s)\n";
    for (const auto& x : v) os << "  " << to_string(x.code) << " " << x.id << ": " << x.detail << "\n";
    os << "\nvalid=false\n";
    for (std::size_t i = 0; i < v.size(); ++i)
      os << "violation." << i + 1 << "=" << to_string(v[i].code) << ":" << v[i].id << "\n";
    r.out = os.str();
  }
  return r;
}

inline CommandResult precondition_failure(const std::string& what) {
  return {kPreconditionFailure, "", "precondition failed: " + what + "\n"};
}

/// Parses and validates; on failure fills `failure` and returns nullopt.
inline std::optional<Document> load(std::string_view text, CommandResult& failure, Format format = Format::Text) {
  Document doc;
  try {
    doc = parse_input(text);
  } catch (const ParseError& e) {
    failure = parse_failure(e, format);
    return std::nullopt;
  }
  if (auto v = validate(doc.manifold, doc.surface); !v.empty()) {
    failure = validation_failure(v, format);
    return std::nullopt;
  }
  return doc;
}

/// Almost fiber component containing every piece of the walk, if any.
inline std::optional<AFComponent> component_of(const SurfaceGraph& s, const DirectedCycle& g) {
  auto pieces = vertices(s, g);
  for (auto& c : almost_fiber(s)) {
    auto inside = [&](const std::string& id) { return std::binary_search(c.pieces.begin(), c.pieces.end(), id); };
    if (std::all_of(pieces.begin(), pieces.end(), inside)) return c;
  }
  return std::nullopt;
}

struct ComponentFacts {
  ComponentVerdict verdict;
  SpiralityHom hom;
  Rational governor;
  std::optional<Rational> lambda;
  std::optional<Potential> potential;
  std::optional<DirectedCycle> supercritical;
};

inline ComponentFacts analyze(const SurfaceGraph& s, const AFComponent& c) {
  ComponentFacts f;
  f.verdict = classify_component(s, c);
  f.hom = spirality(s, c);
  f.governor = governor(s, c);
  if (f.hom.trivial) {
    f.potential = vertex_potential(s, c);
    f.lambda = lambda_bound(s, c);
  } else if (f.verdict.has_gi) {
    f.supercritical = supercritical_cycle_through_gi(s, c);
  }
  return f;
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }
inline std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace detail

// ---------------------------------------------------------------------------

inline CommandResult run_validate(std::string_view text) {
  CommandResult r;
  auto doc = detail::load(text, r);
  if (!doc) return r;
  r.out = "valid: " + std::to_string(doc->manifold.blocks.size()) + " block(s), " +
          std::to_string(doc->manifold.tori.size()) + " torus/tori, " + std::to_string(doc->surface.pieces.size()) +
          " piece(s), " + std::to_string(doc->surface.curves.size()) + " curve(s)\n\nvalid=true\n";
  return r;
}

inline CommandResult run_report(std::string_view text, Format format = Format::Text) {
  CommandResult r;
  auto doc = detail::load(text, r, format);
  if (!doc) return r;
  const SurfaceGraph& s = doc->surface;
  ClassificationReport cls = classify_surface(doc->manifold, s);
  std::vector<detail::ComponentFacts> facts;
  for (const auto& v : cls.components) facts.push_back(detail::analyze(s, v.component));

  if (format == Format::Json) {
    nlohmann::ordered_json j;
    j["valid"] = true;
    j["overall"] = std::string(to_string(cls.overall));
    j["lower"] = std::string(to_string(cls.lower));
    j["upper"] = std::string(to_string(cls.upper));
    j["surface_separable"] = cls.surface_separable;
    j["components"] = nlohmann::ordered_json::array();
    for (const auto& f : facts) {
      nlohmann::ordered_json c;
      c["pieces"] = f.verdict.component.pieces;
      c["curves"] = f.verdict.component.curves;
      c["has_gi"] = f.verdict.has_gi;
      c["piece_count"] = f.verdict.piece_count;
      c["separable"] = f.verdict.separable;
      c["distortion"] = std::string(to_string(f.verdict.distortion));
      c["governor"] = to_string(f.governor);
      c["lambda"] = f.lambda ? nlohmann::ordered_json(to_string(*f.lambda)) : nlohmann::ordered_json();
      c["basis"] = nlohmann::ordered_json::array();
      for (const auto& b : f.hom.basis)
        c["basis"].push_back({{"generator", b.generator}, {"cycle", format_cycle(b.cycle)}, {"value", to_string(b.value)}});
      j["components"].push_back(std::move(c));
    }
    r.out = j.dump(2) + "\n";
    return r;
  }

  std::ostringstream os;
  os << "surface: " << s.pieces.size() << " piece(s), " << s.curves.size() << " curve(s), "
     << cls.components.size() << " almost fiber component(s)\n";
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const auto& f = facts[i];
    os << "component " << i + 1 << ": {" << detail::join_ids(f.verdict.component.pieces, ", ") << "}\n";
    os << "  curves: " << (f.verdict.component.curves.empty() ? "none" : detail::join_ids(f.verdict.component.curves, ", "))
       << "\n";
    os << "  geometrically infinite piece: " << detail::yes_no(f.verdict.has_gi) << "\n";
    os << "  spirality: " << (f.hom.trivial ? "trivial" : "nontrivial") << " (" << f.hom.basis.size()
       << " basis cycle(s))\n";
    for (const auto& b : f.hom.basis) os << "    w(" << format_cycle(b.cycle) << ") = " << to_string(b.value) << "\n";
    os << "  governor: " << to_string(f.governor) << "\n";
    if (f.lambda) os << "  Lambda: " << to_string(*f.lambda) << "\n";
    os << "  distortion: " << to_string(f.verdict.distortion) << "\n";
  }
  os << "overall distortion: " << to_string(cls.overall) << " (lower " << to_string(cls.lower) << ", upper "
     << to_string(cls.upper) << ")\n";
  os << "surface separable: " << detail::yes_no(cls.surface_separable) << "\n";

  os << "\n";
  os << "valid=true\n";
  os << "overall=" << to_string(cls.overall) << "\n";
  os << "lower=" << to_string(cls.lower) << "\n";
  os << "upper=" << to_string(cls.upper) << "\n";
  os << "surface_separable=" << detail::bool_text(cls.surface_separable) << "\n";
  os << "components=" << facts.size() << "\n";
  for (std::size_t i = 0; i < facts.size(); ++i) {
    const auto& f = facts[i];
    std::string key = "component." + std::to_string(i + 1) + ".";
    os << key << "pieces=" << detail::join_ids(f.verdict.component.pieces) << "\n";
    os << key << "has_gi=" << detail::bool_text(f.verdict.has_gi) << "\n";
    os << key << "separable=" << detail::bool_text(f.verdict.separable) << "\n";
    os << key << "governor=" << to_string(f.governor) << "\n";
    if (f.lambda) os << key << "lambda=" << to_string(*f.lambda) << "\n";
    os << key << "distortion=" << to_string(f.verdict.distortion) << "\n";
  }
  r.out = os.str();
  return r;
}

inline CommandResult run_spirality(std::string_view text, const std::optional<std::string>& component_piece = {}) {
  CommandResult r;
  auto doc = detail::load(text, r);
  if (!doc) return r;
  const SurfaceGraph& s = doc->surface;
  auto comps = almost_fiber(s);
  if (component_piece) {
    auto it = std::find_if(comps.begin(), comps.end(), [&](const AFComponent& c) {
      return std::binary_search(c.pieces.begin(), c.pieces.end(), *component_piece);
    });
    if (it == comps.end())
      return detail::precondition_failure("piece '" + *component_piece + "' is not in the almost fiber part");
    comps = {*it};
  }

  std::ostringstream os;
  os << "components=" << comps.size() << "\n";
  for (std::size_t i = 0; i < comps.size(); ++i) {
    auto f = detail::analyze(s, comps[i]);
    std::string key = "component." + std::to_string(i + 1) + ".";
    os << key << "pieces=" << detail::join_ids(comps[i].pieces) << "\n";
    os << key << "rank=" << f.hom.basis.size() << "\n";
    for (const auto& b : f.hom.basis)
      os << key << "basis." << b.generator << "=" << format_cycle(b.cycle) << " w=" << to_string(b.value) << "\n";
    os << key << "trivial=" << detail::bool_text(f.hom.trivial) << "\n";
    os << key << "governor=" << to_string(f.governor) << "\n";
    if (f.potential)
      for (const auto& [piece, value] : f.potential->values)
        os << key << "potential." << piece << "=" << to_string(value) << "\n";
    if (f.lambda) os << key << "lambda=" << to_string(*f.lambda) << "\n";
    if (f.supercritical)
      os << key << "supercritical=" << format_cycle(*f.supercritical) << " w=" << to_string(weight(s, *f.supercritical))
         << "\n";
  }
  r.out = os.str();
  return r;
}

inline CommandResult run_witness(std::string_view text, std::string_view cycle_spec, std::string_view mu_text,
                                 long long steps) {
  CommandResult r;
  auto doc = detail::load(text, r);
  if (!doc) return r;
  const SurfaceGraph& s = doc->surface;

  DirectedCycle gamma;
  Rational mu;
  try {
    gamma = parse_cycle(cycle_spec);
    mu = parse_rational(mu_text);
    check_cycle(s, gamma);
  } catch (const std::exception& e) {
    return detail::precondition_failure(e.what());
  }
  if (mu <= 0) return detail::precondition_failure("--mu must be positive");
  if (steps < 1) return detail::precondition_failure("--steps must be at least 1");
  if (!detail::component_of(s, gamma))
    return detail::precondition_failure("cycle leaves the almost fiber part");
  Rational w = weight(s, gamma);
  if (w <= 1)
    return detail::precondition_failure("cycle weight " + to_string(w) + " is not > 1" +
                                        (w < 1 ? " (reverse the cycle)" : ""));

  XiPeriod period;
  for (const auto& t : gamma.edges) period.ratios.push_back(xi(*s.find_curve(t.curve), t.forward));
  auto ws = build_witness(period, mu, static_cast<std::size_t>(steps));
  auto check = verify_witness(ws);

  std::ostringstream os;
  os << "cycle=" << format_cycle(gamma) << "\n";
  os << "period=";
  for (std::size_t i = 0; i < period.ratios.size(); ++i) os << (i ? "," : "") << to_string(period.ratios[i]);
  os << "\n";
  os << "w=" << to_string(ws.w) << "\n";
  os << "mu=" << to_string(ws.mu) << "\n";
  os << "A=" << ws.A << "\n";
  std::ostringstream d;
  d.precision(17);
  d << ws.D;
  os << "D=" << d.str() << "\n";
  os << "j\txi_j\tt_j\tt_j/xi_j\tt_j/xi_j-t_{j-1}\n";
  os << "0\t-\t" << ws.t[0] << "\t-\t-\n";
  for (std::size_t j = 1; j < ws.t.size(); ++j) {
    Rational q = Rational(ws.t[j]) / period.at(j);
    os << j << "\t" << to_string(period.at(j)) << "\t" << ws.t[j] << "\t" << to_string(q) << "\t"
       << to_string(q - Rational(ws.t[j - 1])) << "\n";
  }
  os << "check.start_above_mu=" << detail::bool_text(check.start_above_mu) << "\n";
  os << "check.integral_quotients=" << detail::bool_text(check.integral_quotients) << "\n";
  os << "check.step_bounds=" << detail::bool_text(check.step_bounds) << "\n";
  os << "check.lower_growth=" << detail::bool_text(check.lower_growth) << "\n";
  os << "check.upper_growth=" << detail::bool_text(check.upper_growth) << "\n";
  os << "verified=" << detail::bool_text(check.passed()) << "\n";
  r.out = os.str();
  if (!check.passed()) {
    r.exit_code = kValidationFailure;
    for (const auto& f : check.failures) r.err += f + "\n";
  }
  return r;
}

/// Builds the tracer configuration from a JSON config and the document's
/// trace_defaults. Config keys: crossings [{xi, lambda_in, lambda_out,
/// step}] or walk "c1:fwd,..." with optional repeat; L_prime, rho, Lambda,
/// epsilon as "p/q" strings, where Lambda and epsilon may be "auto" (taken
/// from the walk's component). Throws ParseError or a precondition message
/// as std::invalid_argument.
inline TraceConfig make_trace_config(const Document& doc, std::string_view config_text) {
  using nlohmann::json;
  json cj;
  try {
    cj = json::parse(config_text.begin(), config_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::SyntaxError, spiral::detail::line_column(config_text, e.byte == 0 ? 0 : e.byte - 1),
                     e.what());
  }
  spiral::detail::Reader rd;
  rd.object(cj, "", {"crossings", "walk", "repeat", "L_prime", "rho", "Lambda", "epsilon", "lambda_in", "lambda_out", "step"});

  TraceDefaults td = doc.trace_defaults.value_or(TraceDefaults{});
  auto pick = [&](const char* key, std::optional<Rational>& slot) {
    auto it = cj.find(key);
    if (it != cj.end() && !(it->is_string() && it->get<std::string>() == "auto"))
      slot = rd.rational(*it, std::string("/") + key);
  };
  pick("L_prime", td.L_prime);
  pick("rho", td.rho);
  pick("Lambda", td.Lambda);
  pick("epsilon", td.epsilon);
  pick("lambda_in", td.lambda_in);
  pick("lambda_out", td.lambda_out);
  pick("step", td.step);
  auto is_auto = [&](const char* key) {
    auto it = cj.find(key);
    return it != cj.end() && it->is_string() && it->get<std::string>() == "auto";
  };

  TraceConfig cfg;
  cfg.L_prime = td.L_prime.value_or(1);
  cfg.rho = td.rho.value_or(1);
  cfg.Lambda = td.Lambda;
  cfg.epsilon = td.epsilon;
  Crossing base;
  base.lambda_in = td.lambda_in.value_or(1);
  base.lambda_out = td.lambda_out.value_or(1);
  base.step = td.step.value_or(1);

  bool has_walk = cj.contains("walk"), has_list = cj.contains("crossings");
  if (has_walk == has_list)
    throw ParseError(ParseErrorKind::SyntaxError, "/", "exactly one of 'crossings' or 'walk' is required");

  if (has_list) {
    const json& list = rd.array(cj, "", "crossings");
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string p = "/crossings/" + std::to_string(i);
      rd.object(list[i], p, {"xi", "lambda_in", "lambda_out", "step"});
      Crossing c = base;
      c.xi = rd.rational(rd.field(list[i], p, "xi"), p + "/xi");
      if (auto v = rd.optional_rational(list[i], p, "lambda_in")) c.lambda_in = *v;
      if (auto v = rd.optional_rational(list[i], p, "lambda_out")) c.lambda_out = *v;
      if (auto v = rd.optional_rational(list[i], p, "step")) c.step = *v;
      cfg.crossings.push_back(std::move(c));
    }
    if (is_auto("Lambda") || is_auto("epsilon"))
      throw std::invalid_argument("'auto' constants need a walk in the surface");
    return cfg;
  }

  std::string spec = rd.string(cj, "", "walk");
  std::int64_t repeat = cj.contains("repeat") ? rd.integer(cj, "", "repeat") : 1;
  if (repeat < 1) throw std::invalid_argument("repeat must be at least 1");
  DirectedCycle walk = parse_cycle(spec);
  check_cycle(doc.surface, walk);
  auto comp = detail::component_of(doc.surface, walk);
  if (!comp) throw std::invalid_argument("walk leaves the almost fiber part");
  for (std::int64_t i = 0; i < repeat; ++i)
    for (const auto& t : walk.edges) {
      Crossing c = base;
      c.xi = xi(*doc.surface.find_curve(t.curve), t.forward);
      cfg.crossings.push_back(std::move(c));
    }
  if (is_auto("epsilon")) cfg.epsilon = governor(doc.surface, *comp);
  if (is_auto("Lambda")) {
    try {
      cfg.Lambda = lambda_bound(doc.surface, *comp);
    } catch (const NonTrivialSpirality&) {
      throw std::invalid_argument("Lambda=auto needs trivial spirality on the walk's component");
    }
  }
  return cfg;
}

inline CommandResult run_trace(std::string_view text, std::string_view config_text) {
  CommandResult r;
  auto doc = detail::load(text, r);
  if (!doc) return r;

  TraceConfig cfg;
  TraceReport tr;
  try {
    cfg = make_trace_config(*doc, config_text);
    tr = trace_bounds(cfg);
  } catch (const ParseError& e) {
    return detail::parse_failure(e);
  } catch (const std::invalid_argument& e) {
    return detail::precondition_failure(e.what());
  } catch (const InvalidCycle& e) {
    return detail::precondition_failure(e.what());
  } catch (const InconsistentConfig& e) {
    return detail::precondition_failure(e.what());
  }

  std::ostringstream os;
  os << "k=" << cfg.crossings.size() << "\n";
  os << "n=" << to_string(tr.n) << "\n";
  os << "L_prime=" << to_string(cfg.L_prime) << "\n";
  os << "epsilon=" << to_string(tr.epsilon) << "\n";
  if (tr.claim3) os << "claim3=" << to_string(*tr.claim3) << "\n";
  os << "j\txi_j\ta_j\tb_j\tclaim2_j\tb_j<=claim2_j" << (tr.claim3 ? "\tb_j<=claim3" : "") << "\n";
  bool all2 = true, all3 = true;
  for (std::size_t j = 0; j < tr.a.size(); ++j) {
    os << j + 1 << "\t" << to_string(cfg.crossings[j].xi) << "\t" << to_string(tr.a[j]) << "\t" << to_string(tr.b[j])
       << "\t" << to_string(tr.claim2[j]) << "\t" << detail::bool_text(tr.within_claim2[j]);
    all2 = all2 && tr.within_claim2[j];
    if (tr.claim3) {
      os << "\t" << detail::bool_text(tr.within_claim3[j]);
      all3 = all3 && tr.within_claim3[j];
    }
    os << "\n";
  }
  std::ostringstream ls;
  ls.precision(17);
  ls << tr.log_sum;
  os << "log_sum=" << ls.str() << "\n";
  os << "claim2_holds=" << detail::bool_text(all2) << "\n";
  if (tr.claim3) os << "claim3_holds=" << detail::bool_text(all3) << "\n";
  r.out = os.str();
  return r;
}

inline CommandResult run_export_dot(std::string_view text) {
  CommandResult r;
  auto doc = detail::load(text, r);
  if (!doc) return r;
  r.out = export_dot(*doc);
  return r;
}

}  // namespace spiral::cli
