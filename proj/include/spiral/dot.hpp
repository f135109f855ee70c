#pragma once

#include <spiral/document.hpp>
#include <spiral/model.hpp>

#include <set>
#include <sstream>
#include <string>
#include <string_view>

namespace spiral {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

/// Surface dual graph as an undirected DOT multigraph. Almost fiber pieces
/// are grouped into one cluster per component; each curve is its own edge
/// labelled "h_a:h_b" with the curve id as the edge id.
inline std::string export_dot(const Document& in) {
  SurfaceGraph s = in.surface;
  canonicalize(s);
  auto node = [&](const Piece& p, std::string_view indent) {
    return std::string(indent) + dot_quote(p.id) + " [label=" +
           dot_quote(p.id + "\\n" + std::string(to_string(p.kind)) + "\\n" + p.block) + "];\n";
  };

  std::ostringstream os;
  os << "graph surface {\n";
  os << "  node [shape=box];\n";
  std::set<std::string> clustered;
  int index = 0;
  for (const auto& comp : almost_fiber(s)) {
    ++index;
    os << "  subgraph " << dot_quote("cluster_af_" + std::to_string(index)) << " {\n";
    os << "    label=" << dot_quote("almost fiber " + std::to_string(index)) << ";\n";
    os << "    style=dashed;\n";
    for (const auto& id : comp.pieces) {
      os << node(*s.find_piece(id), "    ");
      clustered.insert(id);
    }
    os << "  }\n";
  }
  for (const auto& p : s.pieces)
    if (!clustered.count(p.id)) os << node(p, "  ");
  for (const auto& c : s.curves)
    os << "  " << dot_quote(c.piece_a) << " -- " << dot_quote(c.piece_b) << " [id=" << dot_quote(c.id)
       << ", label=" << dot_quote(std::to_string(c.h_a) + ":" + std::to_string(c.h_b)) << "];\n";
  os << "}\n";
  return os.str();
}

}  // namespace spiral
