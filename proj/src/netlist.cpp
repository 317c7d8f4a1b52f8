#include "netres/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "netres/error.hpp"

namespace netres {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

double parse_number(std::string_view token, std::size_t line) {
  std::string_view digits = token;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || end != digits.data() + digits.size() || digits.empty()) {
    throw ParseError(line, "non-numeric value '" + std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, "value '" + std::string(token) + "' is not finite");
  }
  return value;
}

void expect_arity(const std::vector<std::string_view>& fields, std::size_t want,
                  std::string_view kind, std::size_t line) {
  if (fields.size() != want) {
    throw ParseError(line, std::string(kind) + " '" + std::string(fields[0]) + "' expects " +
                               std::to_string(want - 1) + " fields, got " +
                               std::to_string(fields.size() - 1));
  }
}

Resistor parse_resistor(const std::vector<std::string_view>& f, std::size_t line) {
  expect_arity(f, 4, "resistor", line);
  Resistor r{std::string(f[0]), std::string(f[1]), std::string(f[2]), parse_number(f[3], line)};
  if (r.ohms <= 0.0) throw ParseError(line, "nonpositive resistance for " + r.name);
  if (r.a == r.b) throw ParseError(line, r.name + " connects node " + r.a + " to itself");
  return r;
}

Vccs parse_vccs(const std::vector<std::string_view>& f, std::size_t line) {
  expect_arity(f, 6, "VCCS", line);
  Vccs g{std::string(f[0]), std::string(f[1]), std::string(f[2]),
         std::string(f[3]), std::string(f[4]), parse_number(f[5], line)};
  if (g.out_pos == g.out_neg) throw ParseError(line, g.name + " has identical output nodes");
  if (g.ctrl_pos == g.ctrl_neg) throw ParseError(line, g.name + " has identical control nodes");
  return g;
}

Mos parse_mos(const std::vector<std::string_view>& f, std::size_t line) {
  expect_arity(f, 6, "MOS", line);
  Mos m{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3]), 0.0, 0.0};
  bool have_gm = false;
  bool have_gds = false;
  for (std::size_t i = 4; i < 6; ++i) {
    auto eq = f[i].find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(line, "expected key=value, got '" + std::string(f[i]) + "'");
    }
    std::string key(f[i].substr(0, eq));
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    double value = parse_number(f[i].substr(eq + 1), line);
    if (key == "gm" && !have_gm) {
      m.gm = value;
      have_gm = true;
    } else if (key == "gds" && !have_gds) {
      m.gds = value;
      have_gds = true;
    } else {
      throw ParseError(line, "unexpected or repeated MOS parameter '" + key + "'");
    }
  }
  if (!have_gm || !have_gds) throw ParseError(line, m.name + " needs both gm= and gds=");
  if (m.drain == m.source) throw ParseError(line, m.name + " has drain and source on one node");
  if (m.gate == m.source) throw ParseError(line, m.name + " has gate and source on one node");
  return m;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Shortest form that still round-trips keeps files readable.
  for (int digits = 6; digits < 17; ++digits) {
    char shorter[32];
    std::snprintf(shorter, sizeof shorter, "%.*g", digits, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

// Union-find keyed by node name.
class NameUnion {
 public:
  void add(const std::string& name) { parent_.try_emplace(name, name); }

  const std::string& find(const std::string& name) {
    add(name);
    std::string root = name;
    while (parent_.at(root) != root) root = parent_.at(root);
    std::string cur = name;
    while (parent_.at(cur) != root) {
      std::string next = parent_.at(cur);
      parent_[cur] = root;
      cur = next;
    }
    return parent_.find(root)->first;
  }

  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a);
    std::string rb = find(b);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::vector<std::string> members() const {
    std::vector<std::string> out;
    out.reserve(parent_.size());
    for (const auto& [name, parent] : parent_) out.push_back(name);
    return out;
  }

 private:
  std::map<std::string, std::string> parent_;
};

}  // namespace

const std::string& element_name(const Element& e) {
  return std::visit([](const auto& el) -> const std::string& { return el.name; }, e);
}

std::vector<std::string> element_nodes(const Element& e) {
  struct Visitor {
    std::vector<std::string> operator()(const Resistor& r) const { return {r.a, r.b}; }
    std::vector<std::string> operator()(const Vccs& g) const {
      return {g.out_pos, g.out_neg, g.ctrl_pos, g.ctrl_neg};
    }
    std::vector<std::string> operator()(const Mos& m) const { return {m.drain, m.gate, m.source}; }
  };
  return std::visit(Visitor{}, e);
}

NodeMap::NodeMap(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (!lookup_.emplace(names_[i], i).second) {
      throw Error(ErrorKind::Domain, "duplicate node name '" + names_[i] + "'");
    }
  }
}

NodeMap NodeMap::numbered(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return NodeMap(std::move(names));
}

std::optional<std::size_t> NodeMap::find(std::string_view name) const {
  auto it = lookup_.find(std::string(name));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t NodeMap::index_of(std::string_view name) const {
  if (auto idx = find(name)) return *idx;
  throw Error(ErrorKind::Domain, "unknown node '" + std::string(name) + "'");
}

void NodeMap::add_alias(const std::string& alias, std::size_t index) {
  if (index >= names_.size()) throw Error(ErrorKind::Domain, "alias target out of range");
  auto [it, inserted] = lookup_.emplace(alias, index);
  if (!inserted && it->second != index) {
    throw Error(ErrorKind::Domain, "alias '" + alias + "' already names another node");
  }
}

Netlist parse_netlist(std::string_view text) {
  Netlist netlist;
  std::set<std::string> element_names;
  std::size_t order_line = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    auto fields = split_fields(line);
    if (fields.empty() || fields[0].front() == '*') continue;

    std::string_view head = fields[0];
    if (head.front() == '.') {
      std::string directive(head);
      std::transform(directive.begin(), directive.end(), directive.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      if (directive == ".short") {
        if (fields.size() != 3) throw ParseError(line_no, ".short expects two node names");
        netlist.merges.emplace_back(std::string(fields[1]), std::string(fields[2]));
      } else if (directive == ".order") {
        if (fields.size() < 2) throw ParseError(line_no, ".order expects at least one node name");
        for (std::size_t i = 1; i < fields.size(); ++i) netlist.order.emplace_back(fields[i]);
        order_line = line_no;
      } else if (directive == ".title") {
        auto start = line.find(head) + head.size();
        auto rest = line.substr(start);
        auto first = rest.find_first_not_of(" \t");
        netlist.title = first == std::string_view::npos ? std::string() : std::string(rest.substr(first));
      } else if (directive == ".end") {
        break;
      } else {
        throw ParseError(line_no, "unknown directive '" + std::string(head) + "'");
      }
      continue;
    }

    Element element;
    switch (std::toupper(static_cast<unsigned char>(head.front()))) {
      case 'R': element = parse_resistor(fields, line_no); break;
      case 'G': element = parse_vccs(fields, line_no); break;
      case 'M': element = parse_mos(fields, line_no); break;
      default:
        throw ParseError(line_no, "unknown element prefix '" + std::string(1, head.front()) + "'");
    }
    if (!element_names.insert(element_name(element)).second) {
      throw ParseError(line_no, "duplicate element name '" + element_name(element) + "'");
    }
    netlist.elements.push_back(std::move(element));
  }

  if (!netlist.order.empty()) {
    std::set<std::string> known;
    for (const auto& e : netlist.elements) {
      for (auto& n : element_nodes(e)) known.insert(std::move(n));
    }
    for (const auto& [a, b] : netlist.merges) {
      known.insert(a);
      known.insert(b);
    }
    std::set<std::string> seen;
    for (const auto& n : netlist.order) {
      if (!known.count(n)) throw ParseError(order_line, ".order names unknown node '" + n + "'");
      if (!seen.insert(n).second) throw ParseError(order_line, ".order repeats node '" + n + "'");
    }
  }
  return netlist;
}

std::string to_text(const Netlist& netlist) {
  std::ostringstream out;
  if (netlist.title) out << ".title " << *netlist.title << '\n';
  struct Writer {
    std::ostringstream& out;
    void operator()(const Resistor& r) const {
      out << r.name << ' ' << r.a << ' ' << r.b << ' ' << format_number(r.ohms) << '\n';
    }
    void operator()(const Vccs& g) const {
      out << g.name << ' ' << g.out_pos << ' ' << g.out_neg << ' ' << g.ctrl_pos << ' '
          << g.ctrl_neg << ' ' << format_number(g.siemens) << '\n';
    }
    void operator()(const Mos& m) const {
      out << m.name << ' ' << m.drain << ' ' << m.gate << ' ' << m.source
          << " gm=" << format_number(m.gm) << " gds=" << format_number(m.gds) << '\n';
    }
  };
  for (const auto& e : netlist.elements) std::visit(Writer{out}, e);
  for (const auto& [a, b] : netlist.merges) out << ".short " << a << ' ' << b << '\n';
  if (!netlist.order.empty()) {
    out << ".order";
    for (const auto& n : netlist.order) out << ' ' << n;
    out << '\n';
  }
  return out.str();
}

std::pair<Vccs, Resistor> expand_mos(const Mos& mos) {
  if (mos.gds == 0.0) {
    throw Error(ErrorKind::Domain, mos.name + ": gds = 0 leaves the drain-source resistor undefined");
  }
  if (!(mos.gds > 0.0) || !std::isfinite(mos.gds) || !std::isfinite(mos.gm)) {
    throw Error(ErrorKind::Domain, mos.name + ": gds must be positive and gm finite");
  }
  Vccs vccs{mos.name + ".gm", mos.drain, mos.source, mos.gate, mos.source, mos.gm};
  Resistor rds{mos.name + ".rds", mos.drain, mos.source, 1.0 / mos.gds};
  return {std::move(vccs), std::move(rds)};
}

MergedNetlist apply_merges(const Netlist& netlist) {
  NameUnion classes;
  for (const auto& e : netlist.elements) {
    for (const auto& n : element_nodes(e)) classes.add(n);
  }
  for (const auto& [a, b] : netlist.merges) classes.unite(a, b);
  for (const auto& n : netlist.order) classes.add(n);

  // Root -> canonical name. `.order` members take precedence.
  std::map<std::string, std::string> canonical;
  for (const auto& name : classes.members()) {
    canonical.try_emplace(classes.find(name), classes.find(name));
  }
  std::set<std::string> pinned;
  for (const auto& n : netlist.order) {
    const std::string& root = classes.find(n);
    if (pinned.insert(root).second) canonical[root] = n;
  }
  auto canon = [&](const std::string& n) { return canonical.at(classes.find(n)); };

  MergedNetlist result;
  result.netlist.title = netlist.title;
  result.netlist.merges = netlist.merges;

  struct Rename {
    decltype(canon)& c;
    std::vector<std::string>& notes;
    bool operator()(Resistor& r) const {
      r.a = c(r.a);
      r.b = c(r.b);
      if (r.a == r.b) {
        notes.push_back(r.name + " dropped: both terminals merged into node " + r.a);
        return false;
      }
      return true;
    }
    bool operator()(Vccs& g) const {
      g.out_pos = c(g.out_pos);
      g.out_neg = c(g.out_neg);
      g.ctrl_pos = c(g.ctrl_pos);
      g.ctrl_neg = c(g.ctrl_neg);
      if (g.out_pos == g.out_neg) {
        notes.push_back(g.name + " dropped: output terminals merged into node " + g.out_pos);
        return false;
      }
      if (g.ctrl_pos == g.ctrl_neg) {
        notes.push_back(g.name + " dropped: control terminals merged into node " + g.ctrl_pos);
        return false;
      }
      return true;
    }
    bool operator()(Mos& m) const {
      m.drain = c(m.drain);
      m.gate = c(m.gate);
      m.source = c(m.source);
      if (m.drain == m.source) {
        notes.push_back(m.name + " dropped: drain and source merged into node " + m.drain);
        return false;
      }
      if (m.gate == m.source) {
        notes.push_back(m.name + ": gate merged onto source, transconductance has no effect");
      }
      return true;
    }
  };

  for (Element e : netlist.elements) {
    if (std::visit(Rename{canon, result.notes}, e)) result.netlist.elements.push_back(std::move(e));
  }

  std::set<std::string> surviving;
  std::vector<std::string> appearance;
  for (const auto& e : result.netlist.elements) {
    for (auto& n : element_nodes(e)) {
      if (surviving.insert(n).second) appearance.push_back(std::move(n));
    }
  }

  std::vector<std::string> names;
  std::set<std::string> placed;
  for (const auto& n : netlist.order) {
    std::string c = canon(n);
    if (surviving.count(c) && placed.insert(c).second) {
      names.push_back(c);
      result.netlist.order.push_back(c);
    }
  }
  for (const auto& n : appearance) {
    if (placed.insert(n).second) names.push_back(n);
  }

  result.nodes = NodeMap(std::move(names));
  for (const auto& name : classes.members()) {
    std::string c = canon(name);
    if (name == c) continue;
    if (auto idx = result.nodes.find(c)) result.nodes.add_alias(name, *idx);
  }
  return result;
}

}  // namespace netres
