#pragma once
// ============================================================================
// gstl/box.hpp — axis-aligned boxes, per-axis relation triples, distances
// ============================================================================
//
// A box is three proper rational intervals, one per axis.  Two boxes relate
// by the triple of interval relations of their axis projections.  A relation
// pattern (as written after a neighbor operator) constrains each axis to one
// relation or leaves it wildcarded.

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gstl/interval.hpp"
#include "gstl/rational.hpp"

namespace gstl {

struct Box {
  // lo[i] < hi[i] for i in {x=0, y=1, z=2}
  std::array<Rat, 3> lo{};
  std::array<Rat, 3> hi{};

  friend bool operator==(const Box&, const Box&) = default;
};

inline Box make_box(Rat lx, Rat hx, Rat ly, Rat hy, Rat lz, Rat hz) {
  Box b{{lx, ly, lz}, {hx, hy, hz}};
  for (int i = 0; i < 3; ++i)
    if (!(b.lo[i] < b.hi[i]))
      throw std::invalid_argument("make_box: degenerate axis interval");
  return b;
}

using CaRelation = std::array<IaRelation, 3>;

inline CaRelation ca_classify(const Box& a, const Box& b) {
  CaRelation r;
  for (int i = 0; i < 3; ++i)
    r[i] = ia_classify(a.lo[i], a.hi[i], b.lo[i], b.hi[i]);
  return r;
}

inline std::string to_string(const CaRelation& r) {
  return "(" + to_string(r[0]) + "," + to_string(r[1]) + "," + to_string(r[2]) + ")";
}

// Per-axis constraint; nullopt is the wildcard '*'.
struct CaPattern {
  std::array<std::optional<IaRelation>, 3> axes{};

  bool wildcard_only() const {
    return !axes[0] && !axes[1] && !axes[2];
  }
  bool matches(const CaRelation& r) const {
    for (int i = 0; i < 3; ++i)
      if (axes[i] && *axes[i] != r[i]) return false;
    return true;
  }
  friend bool operator==(const CaPattern&, const CaPattern&) = default;
  friend auto operator<=>(const CaPattern&, const CaPattern&) = default;
};

inline std::string to_string(const CaPattern& p) {
  std::string s = "<";
  for (int i = 0; i < 3; ++i) {
    if (i) s += ",";
    s += p.axes[i] ? to_string(*p.axes[i]) : std::string("*");
  }
  return s + ">";
}

// Squared Euclidean distance between the closest points of two boxes, exact.
// Zero iff the boxes touch or overlap.
inline Rat box_min_distance_sq(const Box& a, const Box& b) {
  Rat sum(0);
  for (int i = 0; i < 3; ++i) {
    Rat gap(0);
    if (b.lo[i] > a.hi[i]) gap = b.lo[i] - a.hi[i];
    else if (a.lo[i] > b.hi[i]) gap = a.lo[i] - b.hi[i];
    sum += gap * gap;
  }
  return sum;
}

// Euclidean closest-point distance.  The exact quantity is the square root
// of a rational, so callers that need exact comparisons (the epsilon rule)
// should compare box_min_distance_sq against epsilon squared instead.
inline double box_min_distance(const Box& a, const Box& b) {
  Rat sq = box_min_distance_sq(a, b);
  return std::sqrt(boost::rational_cast<double>(sq));
}

}  // namespace gstl
