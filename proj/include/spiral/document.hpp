#pragma once

// JSON input documents: parsing with located errors, and canonical
// serialization (lists sorted by id, fixed key order).

#include <spiral/model.hpp>
#include <spiral/rational.hpp>

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spiral {

/// Optional defaults for the crossing tracer carried inside a document.
struct TraceDefaults {
  std::optional<Rational> L_prime, rho, Lambda, epsilon, lambda_in, lambda_out, step;
  friend bool operator==(const TraceDefaults&, const TraceDefaults&) = default;
};

struct Document {
  int version = 1;
  ManifoldGraph manifold;
  SurfaceGraph surface;
  std::optional<TraceDefaults> trace_defaults;
  friend bool operator==(const Document&, const Document&) = default;
};

enum class ParseErrorKind { SyntaxError, UnknownField, DuplicateId, DanglingReference, BadEnumValue };

inline std::string_view to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::SyntaxError: return "SyntaxError";
    case ParseErrorKind::UnknownField: return "UnknownField";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::DanglingReference: return "DanglingReference";
    case ParseErrorKind::BadEnumValue: return "BadEnumValue";
  }
  return "?";
}

/// `location` is "line L, column C" for malformed JSON and a JSON pointer
/// ("/surface/pieces/1/kind") for structural problems.
struct ParseError : std::runtime_error {
  ParseError(ParseErrorKind k, std::string loc, const std::string& msg)
      : std::runtime_error(std::string(to_string(k)) + " at " + loc + ": " + msg), kind(k), location(std::move(loc)) {}
  ParseErrorKind kind;
  std::string location;
};

namespace detail {

using nlohmann::json;

inline std::string line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

class Reader {
 public:
  const json& object(const json& parent, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!parent.is_object()) throw ParseError(ParseErrorKind::SyntaxError, path_or_root(path), "expected an object");
    for (const auto& [key, _] : parent.items())
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw ParseError(ParseErrorKind::UnknownField, path + "/" + key, "unknown field '" + key + "'");
    return parent;
  }

  const json& field(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(ParseErrorKind::SyntaxError, path_or_root(path), "missing field '" + key + "'");
    return *it;
  }

  const json& array(const json& obj, const std::string& path, const std::string& key) {
    const json& v = field(obj, path, key);
    if (!v.is_array()) throw ParseError(ParseErrorKind::SyntaxError, path + "/" + key, "expected an array");
    return v;
  }

  std::string string(const json& obj, const std::string& path, const std::string& key) {
    const json& v = field(obj, path, key);
    if (!v.is_string()) throw ParseError(ParseErrorKind::SyntaxError, path + "/" + key, "expected a string");
    return v.get<std::string>();
  }

  std::int64_t integer(const json& obj, const std::string& path, const std::string& key) {
    const json& v = field(obj, path, key);
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      throw ParseError(ParseErrorKind::SyntaxError, path + "/" + key, "integer out of range");
    if (!v.is_number_integer()) throw ParseError(ParseErrorKind::SyntaxError, path + "/" + key, "expected an integer");
    return v.get<std::int64_t>();
  }

  Rational rational(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(ParseErrorKind::SyntaxError, path, "expected a rational string \"p/q\"");
    try {
      return parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(ParseErrorKind::SyntaxError, path, e.what());
    }
  }

  std::optional<Rational> optional_rational(const json& obj, const std::string& path, const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) return std::nullopt;
    return rational(*it, path + "/" + key);
  }

  static std::string path_or_root(const std::string& p) { return p.empty() ? "/" : p; }
};

template <typename Items>
void check_unique(const Items& items, const std::string& path) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (!seen.insert(items[i].id).second)
      throw ParseError(ParseErrorKind::DuplicateId, path + "/" + std::to_string(i) + "/id",
                       "duplicate id '" + items[i].id + "'");
}

inline nlohmann::ordered_json rational_json(const Rational& r) { return to_string(r); }

}  // namespace detail

inline TraceDefaults parse_trace_defaults(const nlohmann::json& v, const std::string& path) {
  detail::Reader rd;
  rd.object(v, path, {"L_prime", "rho", "Lambda", "epsilon", "lambda_in", "lambda_out", "step"});
  TraceDefaults td;
  td.L_prime = rd.optional_rational(v, path, "L_prime");
  td.rho = rd.optional_rational(v, path, "rho");
  td.Lambda = rd.optional_rational(v, path, "Lambda");
  td.epsilon = rd.optional_rational(v, path, "epsilon");
  td.lambda_in = rd.optional_rational(v, path, "lambda_in");
  td.lambda_out = rd.optional_rational(v, path, "lambda_out");
  td.step = rd.optional_rational(v, path, "step");
  return td;
}

/// Parses a UTF-8 JSON document. Lists come back sorted by id.
inline Document parse_input(std::string_view text) {
  using nlohmann::json;
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(ParseErrorKind::SyntaxError, detail::line_column(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }

  detail::Reader rd;
  Document doc;
  rd.object(root, "", {"version", "manifold", "surface", "trace_defaults"});
  std::int64_t version = rd.integer(root, "", "version");
  if (version != 1)
    throw ParseError(ParseErrorKind::BadEnumValue, "/version", "unsupported version " + std::to_string(version));
  doc.version = 1;

  const json& mj = rd.object(rd.field(root, "", "manifold"), "/manifold", {"blocks", "tori"});
  const json& blocks = rd.array(mj, "/manifold", "blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::string p = "/manifold/blocks/" + std::to_string(i);
    rd.object(blocks[i], p, {"id", "geometry"});
    Block b;
    b.id = rd.string(blocks[i], p, "id");
    std::string g = rd.string(blocks[i], p, "geometry");
    auto geo = parse_geometry(g);
    if (!geo) throw ParseError(ParseErrorKind::BadEnumValue, p + "/geometry", "unknown geometry '" + g + "'");
    b.geometry = *geo;
    doc.manifold.blocks.push_back(std::move(b));
  }
  const json& tori = rd.array(mj, "/manifold", "tori");
  for (std::size_t i = 0; i < tori.size(); ++i) {
    std::string p = "/manifold/tori/" + std::to_string(i);
    rd.object(tori[i], p, {"id", "block_a", "block_b"});
    doc.manifold.tori.push_back(
        {rd.string(tori[i], p, "id"), rd.string(tori[i], p, "block_a"), rd.string(tori[i], p, "block_b")});
  }

  const json& sj = rd.object(rd.field(root, "", "surface"), "/surface", {"pieces", "curves"});
  const json& pieces = rd.array(sj, "/surface", "pieces");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::string p = "/surface/pieces/" + std::to_string(i);
    rd.object(pieces[i], p, {"id", "block", "kind"});
    Piece pc;
    pc.id = rd.string(pieces[i], p, "id");
    pc.block = rd.string(pieces[i], p, "block");
    std::string k = rd.string(pieces[i], p, "kind");
    auto kind = parse_piece_kind(k);
    if (!kind) throw ParseError(ParseErrorKind::BadEnumValue, p + "/kind", "unknown piece kind '" + k + "'");
    pc.kind = *kind;
    doc.surface.pieces.push_back(std::move(pc));
  }
  const json& curves = rd.array(sj, "/surface", "curves");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    std::string p = "/surface/curves/" + std::to_string(i);
    rd.object(curves[i], p, {"id", "piece_a", "piece_b", "torus", "h_a", "h_b"});
    Curve c;
    c.id = rd.string(curves[i], p, "id");
    c.piece_a = rd.string(curves[i], p, "piece_a");
    c.piece_b = rd.string(curves[i], p, "piece_b");
    c.torus = rd.string(curves[i], p, "torus");
    c.h_a = rd.integer(curves[i], p, "h_a");
    c.h_b = rd.integer(curves[i], p, "h_b");
    doc.surface.curves.push_back(std::move(c));
  }

  if (auto it = root.find("trace_defaults"); it != root.end())
    doc.trace_defaults = parse_trace_defaults(*it, "/trace_defaults");

  detail::check_unique(doc.manifold.blocks, "/manifold/blocks");
  detail::check_unique(doc.manifold.tori, "/manifold/tori");
  detail::check_unique(doc.surface.pieces, "/surface/pieces");
  detail::check_unique(doc.surface.curves, "/surface/curves");

  auto dangling = [](const std::string& path, const std::string& what, const std::string& id) {
    return ParseError(ParseErrorKind::DanglingReference, path, "unknown " + what + " '" + id + "'");
  };
  for (std::size_t i = 0; i < doc.manifold.tori.size(); ++i) {
    const auto& t = doc.manifold.tori[i];
    std::string p = "/manifold/tori/" + std::to_string(i);
    if (!doc.manifold.find_block(t.block_a)) throw dangling(p + "/block_a", "block", t.block_a);
    if (!doc.manifold.find_block(t.block_b)) throw dangling(p + "/block_b", "block", t.block_b);
  }
  for (std::size_t i = 0; i < doc.surface.pieces.size(); ++i) {
    const auto& pc = doc.surface.pieces[i];
    if (!doc.manifold.find_block(pc.block))
      throw dangling("/surface/pieces/" + std::to_string(i) + "/block", "block", pc.block);
  }
  for (std::size_t i = 0; i < doc.surface.curves.size(); ++i) {
    const auto& c = doc.surface.curves[i];
    std::string p = "/surface/curves/" + std::to_string(i);
    if (!doc.surface.find_piece(c.piece_a)) throw dangling(p + "/piece_a", "piece", c.piece_a);
    if (!doc.surface.find_piece(c.piece_b)) throw dangling(p + "/piece_b", "piece", c.piece_b);
    if (!doc.manifold.find_torus(c.torus)) throw dangling(p + "/torus", "torus", c.torus);
  }

  canonicalize(doc.manifold);
  canonicalize(doc.surface);
  return doc;
}

inline nlohmann::ordered_json trace_defaults_json(const TraceDefaults& td) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  auto put = [&](const char* key, const std::optional<Rational>& v) {
    if (v) j[key] = to_string(*v);
  };
  put("L_prime", td.L_prime);
  put("rho", td.rho);
  put("Lambda", td.Lambda);
  put("epsilon", td.epsilon);
  put("lambda_in", td.lambda_in);
  put("lambda_out", td.lambda_out);
  put("step", td.step);
  return j;
}

/// Canonical text: sorted ids, fixed key order, two-space indent, trailing newline.
inline std::string serialize(const Document& in) {
  Document doc = in;
  canonicalize(doc.manifold);
  canonicalize(doc.surface);

  nlohmann::ordered_json j;
  j["version"] = doc.version;
  auto& blocks = j["manifold"]["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : doc.manifold.blocks)
    blocks.push_back({{"id", b.id}, {"geometry", std::string(to_string(b.geometry))}});
  auto& tori = j["manifold"]["tori"] = nlohmann::ordered_json::array();
  for (const auto& t : doc.manifold.tori) tori.push_back({{"id", t.id}, {"block_a", t.block_a}, {"block_b", t.block_b}});
  auto& pieces = j["surface"]["pieces"] = nlohmann::ordered_json::array();
  for (const auto& p : doc.surface.pieces)
    pieces.push_back({{"id", p.id}, {"block", p.block}, {"kind", std::string(to_string(p.kind))}});
  auto& curves = j["surface"]["curves"] = nlohmann::ordered_json::array();
  for (const auto& c : doc.surface.curves)
    curves.push_back({{"id", c.id},
                      {"piece_a", c.piece_a},
                      {"piece_b", c.piece_b},
                      {"torus", c.torus},
                      {"h_a", c.h_a},
                      {"h_b", c.h_b}});
  if (doc.trace_defaults) j["trace_defaults"] = trace_defaults_json(*doc.trace_defaults);
  return j.dump(2) + "\n";
}

}  // namespace spiral
