#pragma once
// ============================================================================
// gstl/model.hpp — layered spatial graphs and their on-disk documents
// ============================================================================
//
// A spatial model is a stack of layers V1..Vn of abstraction, most abstract
// first.  Parent/child edges may only connect adjacent layers; neighbor
// edges only connect nodes within one layer.  Nodes optionally carry a box;
// when two same-layer nodes both have boxes and their minimal distance is
// strictly below epsilon, a neighbor edge is derived automatically.
//
// Document format (line oriented, '#' comments):
//
//   epsilon: 1/2
//   layer:
//     kitchen "kitchen"
//   layer:
//     hand "hand" box 0 1 0 1 0 1
//   parents:
//     kitchen hand
//   neighbors:
//     a b

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gstl/box.hpp"
#include "gstl/rational.hpp"

namespace gstl {

using NodeId = std::string;

struct ModelError : std::runtime_error {
  std::string kind;
  ModelError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

struct NodeInfo {
  NodeId id;
  std::string label;
  std::optional<Box> box;
  int layer = 0;  // 0-based, most abstract first
};

class SpatialModel {
 public:
  // Builds and validates a model; derives epsilon neighbor edges.
  // parent_pairs are (parent, child) with child exactly one layer below.
  static SpatialModel build(std::vector<std::vector<NodeInfo>> layers,
                            const std::vector<std::pair<NodeId, NodeId>>& parent_pairs,
                            const std::vector<std::pair<NodeId, NodeId>>& neighbor_pairs,
                            Rat epsilon) {
    SpatialModel m;
    m.epsilon_ = epsilon;
    m.layers_.resize(layers.size());
    for (std::size_t li = 0; li < layers.size(); ++li) {
      if (layers[li].empty()) throw ModelError("EmptyLayer", "layer " + std::to_string(li));
      for (NodeInfo n : layers[li]) {
        n.layer = static_cast<int>(li);
        if (m.nodes_.count(n.id)) throw ModelError("DuplicateNode", n.id);
        m.layers_[li].push_back(n.id);
        m.nodes_.emplace(n.id, std::move(n));
      }
    }
    for (auto& [p, c] : parent_pairs) {
      const NodeInfo& pi = m.require(p);
      const NodeInfo& ci = m.require(c);
      if (ci.layer != pi.layer + 1)
        throw ModelError("LayerViolation",
                         "parent edge " + p + " -> " + c + " must span adjacent layers");
      m.parents_[c].insert(p);
      m.children_[p].insert(c);
    }
    for (auto& [a, b] : neighbor_pairs) {
      const NodeInfo& ai = m.require(a);
      const NodeInfo& bi = m.require(b);
      if (a == b) throw ModelError("SelfNeighbor", a);
      if (ai.layer != bi.layer)
        throw ModelError("LayerViolation",
                         "neighbor edge " + a + " -- " + b + " must stay within one layer");
      m.neighbors_[a].insert(b);
      m.neighbors_[b].insert(a);
    }
    m.derive_epsilon_neighbors();
    for (auto& [id, info] : m.nodes_) {
      if (info.layer > 0 && m.parents(id).empty())
        throw ModelError("OrphanNode", id + " has no parent");
    }
    return m;
  }

  const std::vector<std::vector<NodeId>>& layers() const { return layers_; }
  Rat epsilon() const { return epsilon_; }

  bool has_node(const NodeId& v) const { return nodes_.count(v) != 0; }
  const NodeInfo& node(const NodeId& v) const { return require(v); }
  int layer_of(const NodeId& v) const { return require(v).layer; }

  std::vector<NodeId> parents(const NodeId& v) const { return sorted(parents_, v); }
  std::vector<NodeId> children(const NodeId& v) const { return sorted(children_, v); }
  std::vector<NodeId> neighbors(const NodeId& v) const { return sorted(neighbors_, v); }

  // First node of the top layer; the conventional evaluation root.
  NodeId default_root() const { return layers_.at(0).at(0); }

  std::string to_document() const {
    std::ostringstream out;
    out << "epsilon: " << to_string(epsilon_) << "\n";
    for (auto& layer : layers_) {
      out << "layer:\n";
      for (auto& id : layer) {
        const NodeInfo& n = nodes_.at(id);
        out << "  " << id << " \"" << n.label << "\"";
        if (n.box) {
          out << " box";
          for (int i = 0; i < 3; ++i)
            out << " " << to_string(n.box->lo[i]) << " " << to_string(n.box->hi[i]);
        }
        out << "\n";
      }
    }
    out << "parents:\n";
    for (auto& [c, ps] : parents_)
      for (auto& p : ps) out << "  " << p << " " << c << "\n";
    out << "neighbors:\n";
    std::set<std::pair<NodeId, NodeId>> seen;
    for (auto& [a, ns] : neighbors_)
      for (auto& b : ns) {
        auto key = a < b ? std::pair{a, b} : std::pair{b, a};
        if (seen.insert(key).second) out << "  " << key.first << " " << key.second << "\n";
      }
    return out.str();
  }

  static SpatialModel parse_document(const std::string& text);

 private:
  const NodeInfo& require(const NodeId& v) const {
    auto it = nodes_.find(v);
    if (it == nodes_.end()) throw ModelError("UnknownNode", v);
    return it->second;
  }

  static std::vector<NodeId> sorted(const std::map<NodeId, std::set<NodeId>>& m,
                                    const NodeId& v) {
    auto it = m.find(v);
    if (it == m.end()) return {};
    return {it->second.begin(), it->second.end()};
  }

  void derive_epsilon_neighbors() {
    Rat eps2 = epsilon_ * epsilon_;
    for (auto& layer : layers_) {
      for (std::size_t i = 0; i < layer.size(); ++i) {
        for (std::size_t j = i + 1; j < layer.size(); ++j) {
          const NodeInfo& a = nodes_.at(layer[i]);
          const NodeInfo& b = nodes_.at(layer[j]);
          if (!a.box || !b.box) continue;
          if (box_min_distance_sq(*a.box, *b.box) < eps2) {
            neighbors_[a.id].insert(b.id);
            neighbors_[b.id].insert(a.id);
          }
        }
      }
    }
  }

  std::vector<std::vector<NodeId>> layers_;
  std::map<NodeId, NodeInfo> nodes_;
  std::map<NodeId, std::set<NodeId>> parents_, children_, neighbors_;
  Rat epsilon_{0};
};

// ----------------------------------------------------------------------------
// Document parsing
// ----------------------------------------------------------------------------

namespace detail {

inline std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace detail

inline SpatialModel SpatialModel::parse_document(const std::string& text) {
  std::vector<std::vector<NodeInfo>> layers;
  std::vector<std::pair<NodeId, NodeId>> parent_pairs, neighbor_pairs;
  std::optional<Rat> epsilon;

  enum class Section { None, Layer, Parents, Neighbors } section = Section::None;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw ModelError("DocumentSyntax", "line " + std::to_string(lineno) + ": " + msg);
    };

    if (line.rfind("epsilon:", 0) == 0) {
      epsilon = parse_rational(detail::trim(line.substr(8)));
      continue;
    }
    if (line == "layer:") { layers.emplace_back(); section = Section::Layer; continue; }
    if (line == "parents:") { section = Section::Parents; continue; }
    if (line == "neighbors:") { section = Section::Neighbors; continue; }

    switch (section) {
      case Section::None:
        fail("expected a section header");
        break;
      case Section::Layer: {
        NodeInfo n;
        std::string rest = line;
        auto sp = rest.find_first_of(" \t");
        n.id = sp == std::string::npos ? rest : rest.substr(0, sp);
        rest = sp == std::string::npos ? "" : detail::trim(rest.substr(sp));
        if (!rest.empty() && rest[0] == '"') {
          auto close = rest.find('"', 1);
          if (close == std::string::npos) fail("unterminated label");
          n.label = rest.substr(1, close - 1);
          rest = detail::trim(rest.substr(close + 1));
        } else {
          n.label = n.id;
        }
        if (!rest.empty()) {
          auto words = detail::split_ws(rest);
          if (words.size() != 7 || words[0] != "box") fail("expected: box lx hx ly hy lz hz");
          try {
            n.box = make_box(parse_rational(words[1]), parse_rational(words[2]),
                             parse_rational(words[3]), parse_rational(words[4]),
                             parse_rational(words[5]), parse_rational(words[6]));
          } catch (const std::invalid_argument& e) {
            fail(e.what());
          }
        }
        layers.back().push_back(std::move(n));
        break;
      }
      case Section::Parents:
      case Section::Neighbors: {
        auto words = detail::split_ws(line);
        if (words.size() != 2) fail("expected a pair of node ids");
        if (section == Section::Parents) parent_pairs.emplace_back(words[0], words[1]);
        else neighbor_pairs.emplace_back(words[0], words[1]);
        break;
      }
    }
  }
  if (!epsilon) throw ModelError("DocumentSyntax", "missing epsilon");
  if (layers.empty()) throw ModelError("DocumentSyntax", "no layers");
  return build(std::move(layers), parent_pairs, neighbor_pairs, *epsilon);
}

}  // namespace gstl
