#pragma once
// ============================================================================
// gstl/signal.hpp — discrete signals and atomic-predicate interpretations
// ============================================================================
//
// A signal assigns one value (real, boolean, or categorical) to each declared
// node at every time step 0..horizon.  An interpretation says how an atomic
// predicate reads a value:
//
//   bool              value is a boolean, taken as is
//   sign              real value, holds iff value > 0
//   above <c>         real value, holds iff value > c
//   below <c>         real value, holds iff value < c
//   label [<s>]       categorical, holds iff value equals s (default: the
//                     predicate's own name)
//   bit <i>           non-negative integral value, holds iff bit i is set
//                     (for packed flag words; lets several predicates read
//                     one value stream independently)
//
// Document format:
//
//   horizon: 6
//   interp: flag bool
//   interp: hot above 2.5
//   interp: obj label cup
//   v, 0, true
//   v, 1, false

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gstl/model.hpp"

namespace gstl {

using Value = std::variant<double, bool, std::string>;

struct EvalError : std::runtime_error {
  std::string kind;
  EvalError(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

class Signal {
 public:
  Signal() = default;
  explicit Signal(int horizon) : horizon_(horizon) {
    if (horizon < 0) throw EvalError("BadHorizon", std::to_string(horizon));
  }

  int horizon() const { return horizon_; }

  void set(const NodeId& v, int t, Value val) {
    if (t < 0 || t > horizon_)
      throw EvalError("OutOfHorizon", v + " at t=" + std::to_string(t));
    values_[{v, t}] = std::move(val);
    declared_.insert(v);
  }

  bool declares(const NodeId& v) const { return declared_.count(v) != 0; }

  const Value& at(const NodeId& v, int t) const {
    if (t < 0 || t > horizon_)
      throw EvalError("OutOfHorizon", v + " at t=" + std::to_string(t));
    auto it = values_.find({v, t});
    if (it == values_.end()) throw EvalError("MissingValue", v + " at t=" + std::to_string(t));
    return it->second;
  }

  // Every declared node must carry a value at every step 0..horizon.
  void check_total() const {
    for (auto& v : declared_)
      for (int t = 0; t <= horizon_; ++t)
        if (!values_.count({v, t}))
          throw EvalError("MissingValue", v + " at t=" + std::to_string(t));
  }

  static Signal parse_document(const std::string& text, struct Interpretation* interp_out);

 private:
  int horizon_ = 0;
  std::map<std::pair<NodeId, int>, Value> values_;
  std::set<NodeId> declared_;
};

struct InterpSpec {
  enum class Kind { Bool, Sign, Above, Below, Label, Bit } kind = Kind::Bool;
  double threshold = 0.0;                // Above/Below
  std::optional<std::string> label;      // Label; nullopt = predicate name
  int bit = 0;                           // Bit
};

struct Interpretation {
  std::map<std::string, InterpSpec> table;

  bool has(const std::string& pred) const { return table.count(pred) != 0; }
};

// Whether atomic predicate `pred` holds on `value` under `interp`.
inline bool atom_holds(const Interpretation& interp, const std::string& pred,
                       const Value& value) {
  auto it = interp.table.find(pred);
  if (it == interp.table.end()) throw EvalError("MissingInterpretation", pred);
  const InterpSpec& spec = it->second;
  auto want = [&](const char* ty) {
    throw EvalError("TypeMismatch", pred + " expects a " + ty + " value");
  };
  switch (spec.kind) {
    case InterpSpec::Kind::Bool:
      if (!std::holds_alternative<bool>(value)) want("boolean");
      return std::get<bool>(value);
    case InterpSpec::Kind::Sign:
      if (!std::holds_alternative<double>(value)) want("real");
      return std::get<double>(value) > 0.0;
    case InterpSpec::Kind::Above:
      if (!std::holds_alternative<double>(value)) want("real");
      return std::get<double>(value) > spec.threshold;
    case InterpSpec::Kind::Below:
      if (!std::holds_alternative<double>(value)) want("real");
      return std::get<double>(value) < spec.threshold;
    case InterpSpec::Kind::Label:
      if (!std::holds_alternative<std::string>(value)) want("categorical");
      return std::get<std::string>(value) == spec.label.value_or(pred);
    case InterpSpec::Kind::Bit: {
      if (!std::holds_alternative<double>(value)) want("real");
      double d = std::get<double>(value);
      if (d < 0 || d != static_cast<double>(static_cast<std::uint64_t>(d)))
        want("non-negative integral");
      return (static_cast<std::uint64_t>(d) >> spec.bit) & 1u;
    }
  }
  throw std::logic_error("atom_holds: bad spec");
}

inline Value parse_value(const std::string& word) {
  if (word == "true") return true;
  if (word == "false") return false;
  try {
    std::size_t pos = 0;
    double d = std::stod(word, &pos);
    if (pos == word.size()) return d;
  } catch (...) {
  }
  return word;  // categorical label
}

inline Signal Signal::parse_document(const std::string& text, Interpretation* interp_out) {
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::optional<Signal> sig;
  auto fail = [&](const std::string& msg) {
    throw EvalError("DocumentSyntax", "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) continue;
    if (line.rfind("horizon:", 0) == 0) {
      sig = Signal(std::stoi(detail::trim(line.substr(8))));
      continue;
    }
    if (line.rfind("interp:", 0) == 0) {
      if (!interp_out) continue;
      auto words = detail::split_ws(line.substr(7));
      if (words.size() < 2) fail("expected: interp: <pred> <kind> [param]");
      InterpSpec spec;
      const std::string& kind = words[1];
      if (kind == "bool") spec.kind = InterpSpec::Kind::Bool;
      else if (kind == "sign") spec.kind = InterpSpec::Kind::Sign;
      else if (kind == "above" || kind == "below") {
        if (words.size() != 3) fail("expected a threshold after " + kind);
        spec.kind = kind == "above" ? InterpSpec::Kind::Above : InterpSpec::Kind::Below;
        spec.threshold = std::stod(words[2]);
      } else if (kind == "label") {
        spec.kind = InterpSpec::Kind::Label;
        if (words.size() == 3) spec.label = words[2];
      } else if (kind == "bit") {
        if (words.size() != 3) fail("expected a bit index after bit");
        spec.kind = InterpSpec::Kind::Bit;
        spec.bit = std::stoi(words[2]);
        if (spec.bit < 0 || spec.bit > 62) fail("bit index out of range");
      } else {
        fail("unknown interpretation kind: " + kind);
      }
      interp_out->table[words[0]] = spec;
      continue;
    }
    if (!sig) fail("horizon must come before rows");
    // node, t, value
    std::vector<std::string> parts;
    std::string piece;
    std::istringstream ls(line);
    while (std::getline(ls, piece, ',')) parts.push_back(detail::trim(piece));
    if (parts.size() != 3) fail("expected: node, t, value");
    sig->set(parts[0], std::stoi(parts[1]), parse_value(parts[2]));
  }
  if (!sig) throw EvalError("DocumentSyntax", "missing horizon");
  sig->check_total();
  return *sig;
}

}  // namespace gstl
