#pragma once
// ============================================================================
// gstl/interval.hpp — the thirteen interval relations and their lattice
// ============================================================================
//
// Seven base relations {b, m, o, s, f, d, e} plus the inverses of all but e
// give the thirteen jointly-exhaustive, pairwise-disjoint relations between
// two proper intervals.  Classification works on any ordered scalar; boxes
// use exact rationals.
//
// Convexity of a relation set is decided on the canonical endpoint lattice:
// each relation maps to the pair (rank of a.lo, rank of a.hi) relative to
// b's endpoints, and a set is convex iff its image is an order interval.

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "gstl/rational.hpp"

namespace gstl {

enum class IaBase : std::uint8_t { Before, Meets, Overlaps, Starts, Finishes, During, Equals };

struct IaRelation {
  IaBase base = IaBase::Equals;
  bool inverse = false;  // never set for Equals

  friend bool operator==(const IaRelation&, const IaRelation&) = default;
  friend auto operator<=>(const IaRelation&, const IaRelation&) = default;
};

inline IaRelation ia_inverse(IaRelation r) {
  if (r.base == IaBase::Equals) return r;
  return {r.base, !r.inverse};
}

inline std::string to_string(IaRelation r) {
  static const char* names[] = {"b", "m", "o", "s", "f", "d", "e"};
  std::string s = names[static_cast<int>(r.base)];
  if (r.inverse) s += "i";
  return s;
}

inline std::optional<IaRelation> ia_from_string(const std::string& s) {
  static const std::array<std::pair<const char*, IaBase>, 7> table = {{
      {"b", IaBase::Before},
      {"m", IaBase::Meets},
      {"o", IaBase::Overlaps},
      {"s", IaBase::Starts},
      {"f", IaBase::Finishes},
      {"d", IaBase::During},
      {"e", IaBase::Equals},
  }};
  for (auto& [name, base] : table) {
    if (s == name) return IaRelation{base, false};
    if (base != IaBase::Equals && s == std::string(name) + "i") return IaRelation{base, true};
  }
  return std::nullopt;
}

inline const std::array<IaRelation, 13>& ia_all_relations() {
  static const std::array<IaRelation, 13> all = {{
      {IaBase::Before, false},   {IaBase::Before, true},
      {IaBase::Meets, false},    {IaBase::Meets, true},
      {IaBase::Overlaps, false}, {IaBase::Overlaps, true},
      {IaBase::Starts, false},   {IaBase::Starts, true},
      {IaBase::Finishes, false}, {IaBase::Finishes, true},
      {IaBase::During, false},   {IaBase::During, true},
      {IaBase::Equals, false},
  }};
  return all;
}

// Classifies proper intervals [alo,ahi] vs [blo,bhi]; requires lo < hi on
// both sides (degenerate intervals would break pairwise disjointness).
template <typename T>
IaRelation ia_classify(const T& alo, const T& ahi, const T& blo, const T& bhi) {
  if (!(alo < ahi) || !(blo < bhi))
    throw std::invalid_argument("ia_classify: degenerate interval");
  auto base = [](const T& xlo, const T& xhi, const T& ylo, const T& yhi)
      -> std::optional<IaBase> {
    if (xhi < ylo) return IaBase::Before;
    if (xhi == ylo) return IaBase::Meets;
    if (xlo < ylo && ylo < xhi && xhi < yhi) return IaBase::Overlaps;
    if (xlo == ylo && xhi < yhi) return IaBase::Starts;
    if (xhi == yhi && ylo < xlo) return IaBase::Finishes;
    if (ylo < xlo && xhi < yhi) return IaBase::During;
    if (xlo == ylo && xhi == yhi) return IaBase::Equals;
    return std::nullopt;
  };
  if (auto r = base(alo, ahi, blo, bhi)) return {*r, false};
  auto r = base(blo, bhi, alo, ahi);
  if (!r || *r == IaBase::Equals)
    throw std::logic_error("ia_classify: relation table is not exhaustive");
  return {*r, true};
}

// ----------------------------------------------------------------------------
// Convexity on the endpoint lattice
// ----------------------------------------------------------------------------

// (rank of a.lo, rank of a.hi) against b's endpoints:
// 0 below b.lo, 1 at b.lo, 2 strictly inside, 3 at b.hi, 4 above b.hi.
inline std::pair<int, int> ia_lattice_coords(IaRelation r) {
  switch (r.base) {
    case IaBase::Before:   return r.inverse ? std::pair{4, 4} : std::pair{0, 0};
    case IaBase::Meets:    return r.inverse ? std::pair{3, 4} : std::pair{0, 1};
    case IaBase::Overlaps: return r.inverse ? std::pair{2, 4} : std::pair{0, 2};
    case IaBase::Starts:   return r.inverse ? std::pair{1, 4} : std::pair{1, 2};
    case IaBase::Finishes: return r.inverse ? std::pair{0, 3} : std::pair{2, 3};
    case IaBase::During:   return r.inverse ? std::pair{0, 4} : std::pair{2, 2};
    case IaBase::Equals:   return {1, 3};
  }
  throw std::logic_error("ia_lattice_coords: bad relation");
}

// A set is convex iff it contains every relation whose lattice point lies in
// the componentwise bounding box of the set's image.  The empty set counts
// as convex.
inline bool ia_is_convex(const std::set<IaRelation>& rels) {
  if (rels.empty()) return true;
  int xmin = 5, xmax = -1, ymin = 5, ymax = -1;
  for (auto r : rels) {
    auto [x, y] = ia_lattice_coords(r);
    xmin = std::min(xmin, x); xmax = std::max(xmax, x);
    ymin = std::min(ymin, y); ymax = std::max(ymax, y);
  }
  for (auto r : ia_all_relations()) {
    auto [x, y] = ia_lattice_coords(r);
    if (xmin <= x && x <= xmax && ymin <= y && y <= ymax && !rels.count(r))
      return false;
  }
  return true;
}

}  // namespace gstl
