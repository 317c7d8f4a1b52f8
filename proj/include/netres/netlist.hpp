#pragma once

// Netlist text format (one statement per line):
//
//   R<name> <n+> <n-> <ohms>
//   G<name> <k> <k'> <j> <j'> <siemens>     current g*(V_j - V_j') from k to k'
//   M<name> <drain> <gate> <source> gm=<S> gds=<S>
//   .short <a> <b>                          merge two nodes
//   .order <n1> <n2> ...                    fix node indexing
//   .title <text>
//   * comment
//
// Element prefixes are case-insensitive, node names are case-sensitive.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace netres {

struct Resistor {
  std::string name;
  std::string a;
  std::string b;
  double ohms = 0.0;

  bool operator==(const Resistor&) const = default;
};

// Voltage-controlled current source. Node order follows the stamp labels:
// output pair (k, k'), control pair (j, j').
struct Vccs {
  std::string name;
  std::string out_pos;
  std::string out_neg;
  std::string ctrl_pos;
  std::string ctrl_neg;
  double siemens = 0.0;

  bool operator==(const Vccs&) const = default;
};

// MOS transistor at an operating point: transconductance gm driven by the
// gate-source voltage, plus output conductance gds between drain and source.
struct Mos {
  std::string name;
  std::string drain;
  std::string gate;
  std::string source;
  double gm = 0.0;
  double gds = 0.0;

  bool operator==(const Mos&) const = default;
};

using Element = std::variant<Resistor, Vccs, Mos>;

const std::string& element_name(const Element& e);
std::vector<std::string> element_nodes(const Element& e);

struct Netlist {
  std::optional<std::string> title;
  std::vector<Element> elements;
  std::vector<std::pair<std::string, std::string>> merges;
  std::vector<std::string> order;

  bool operator==(const Netlist&) const = default;
};

// Canonical node names in index order. Lookups also accept any alias that
// was merged into a canonical node.
class NodeMap {
 public:
  NodeMap() = default;
  explicit NodeMap(std::vector<std::string> names);

  static NodeMap numbered(std::size_t n);

  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t index) const { return names_.at(index); }

  std::optional<std::size_t> find(std::string_view name) const;
  // Throws Error(Domain) for unknown names.
  std::size_t index_of(std::string_view name) const;

  void add_alias(const std::string& alias, std::size_t index);

  bool operator==(const NodeMap& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

Netlist parse_netlist(std::string_view text);

// Inverse of parse_netlist; numbers are written with enough digits to
// round-trip exactly.
std::string to_text(const Netlist& netlist);

std::pair<Vccs, Resistor> expand_mos(const Mos& mos);

struct MergedNetlist {
  Netlist netlist;  // surviving elements, node names canonicalized
  NodeMap nodes;
  std::vector<std::string> notes;  // one line per dropped element
};

// Unifies every `.short` class onto one canonical name and indexes the
// surviving nodes. The canonical name of a class is the member listed in
// `.order` if there is one, otherwise the lexicographically least member.
MergedNetlist apply_merges(const Netlist& netlist);

}  // namespace netres
