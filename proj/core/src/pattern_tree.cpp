#include "pattree/pattern_tree.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "pattree/errors.hpp"

namespace pattree {

std::vector<EdgeConstraint> corner_constraints(Corner c, int parent, int child) {
  const PointRef u{parent, 1};
  const PointRef v{child, 1};
  const bool east = c == Corner::NE || c == Corner::SE;
  const bool north = c == Corner::NE || c == Corner::NW;
  return {east ? EdgeConstraint::less_than(Axis::x, u, v) : EdgeConstraint::less_than(Axis::x, v, u),
          north ? EdgeConstraint::less_than(Axis::y, u, v) : EdgeConstraint::less_than(Axis::y, v, u)};
}

int PatternTree::add_vertex(std::string name, Permutation label) {
  vertices_.push_back(TreeVertex{std::move(name), std::move(label), 0});
  return vertex_count() - 1;
}

int PatternTree::add_gadget_vertex(std::string name, Permutation label, int mark) {
  if (mark < 1 || mark > label.size()) throw DataError("gadget mark out of range");
  vertices_.push_back(TreeVertex{std::move(name), std::move(label), mark});
  return vertex_count() - 1;
}

void PatternTree::add_edge(int parent, int child, std::vector<EdgeConstraint> constraints) {
  for (auto& c : constraints) {
    if (c.kind == EdgeConstraint::Kind::equal && c.left.vertex == child && c.right.vertex == parent) {
      std::swap(c.left, c.right);
    }
  }
  edges_.push_back(TreeEdge{parent, child, std::move(constraints)});
}

void PatternTree::set_root(int vertex) { root_ = vertex; }

std::vector<int> PatternTree::child_edges(int v) const {
  std::vector<int> out;
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (edges_[static_cast<size_t>(e)].parent == v) out.push_back(e);
  }
  return out;
}

int PatternTree::parent_edge(int v) const {
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (edges_[static_cast<size_t>(e)].child == v) return e;
  }
  return -1;
}

std::vector<int> PatternTree::post_order() const {
  std::vector<int> out;
  out.reserve(vertices_.size());
  // Iterative DFS; children visited in edge order.
  std::vector<std::pair<int, size_t>> stack{{root_, 0}};
  std::vector<std::vector<int>> kids(vertices_.size());
  for (const auto& e : edges_) kids[static_cast<size_t>(e.parent)].push_back(e.child);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    if (next < kids[static_cast<size_t>(v)].size()) {
      const int c = kids[static_cast<size_t>(v)][next++];
      stack.emplace_back(c, 0);
    } else {
      out.push_back(v);
      stack.pop_back();
    }
  }
  return out;
}

int PatternTree::max_size() const {
  int s = 0;
  for (const auto& v : vertices_) s = std::max(s, v.size());
  return s;
}

int PatternTree::total_size() const {
  int s = 0;
  for (const auto& v : vertices_) s += v.size();
  return s;
}

bool PatternTree::has_gadgets() const {
  return std::any_of(vertices_.begin(), vertices_.end(), [](const TreeVertex& v) { return v.is_gadget(); });
}

int PatternTree::point_id(PointRef p) const {
  int offset = 0;
  for (int v = 0; v < p.vertex; ++v) offset += vertices_[static_cast<size_t>(v)].size();
  return offset + p.index - 1;
}

PointRef PatternTree::point_ref(int id) const {
  for (int v = 0; v < vertex_count(); ++v) {
    const int s = vertices_[static_cast<size_t>(v)].size();
    if (id < s) return {v, id + 1};
    id -= s;
  }
  throw std::out_of_range("point id out of range");
}

GadgetOrientation gadget_orientation(const Permutation& label, int mark) {
  static const Permutation k3214({3, 2, 1, 4});
  static const Permutation k43215({4, 3, 2, 1, 5});
  const Permutation& canonical = label.size() == 4 ? k3214 : k43215;
  if (label.size() != 4 && label.size() != 5) {
    throw DataError("gadget label " + label.to_string() + " is not a symmetry of 3214 or 43215");
  }
  const int r = canonical.size();
  for (D4 g : kAllD4) {
    if (d4_act(g, canonical) != label) continue;
    const auto [x, y] = d4_map_point(g, r, r, canonical(r));
    (void)y;
    if (x == mark) return {canonical, g};
  }
  throw DataError("gadget label " + label.to_string() + " marked at " + std::to_string(mark) +
                  " is not a symmetry of " + canonical.to_string() + " marked at " + std::to_string(r));
}

void PatternTree::validate() const {
  const int m = vertex_count();
  if (m == 0) throw DataError("pattern tree has no vertices");
  if (root_ < 0 || root_ >= m) throw DataError("pattern tree root out of range");
  std::map<std::string, int> names;
  for (int v = 0; v < m; ++v) {
    const auto& vx = vertices_[static_cast<size_t>(v)];
    if (!names.emplace(vx.name, v).second) throw DataError("duplicate vertex name '" + vx.name + "'");
    if (vx.is_gadget()) (void)gadget_orientation(vx.label, vx.mark);
  }
  if (static_cast<int>(edges_.size()) != m - 1) throw DataError("pattern tree must have exactly |V|-1 edges");
  std::vector<int> indeg(static_cast<size_t>(m), 0);
  for (const auto& e : edges_) {
    if (e.parent < 0 || e.parent >= m || e.child < 0 || e.child >= m) throw DataError("edge endpoint out of range");
    if (e.parent == e.child) throw DataError("self-loop edge");
    ++indeg[static_cast<size_t>(e.child)];
  }
  if (indeg[static_cast<size_t>(root_)] != 0) throw DataError("root has an incoming edge");
  for (int v = 0; v < m; ++v) {
    if (v != root_ && indeg[static_cast<size_t>(v)] != 1) {
      throw DataError("vertex '" + vertices_[static_cast<size_t>(v)].name + "' must have exactly one parent");
    }
  }
  if (static_cast<int>(post_order().size()) != m) throw DataError("pattern tree is not connected");

  const auto check_ref = [&](const PointRef& p, const TreeEdge& e) {
    if (p.vertex != e.parent && p.vertex != e.child) {
      throw DataError("constraint on edge " + vertices_[static_cast<size_t>(e.parent)].name + "->" +
                      vertices_[static_cast<size_t>(e.child)].name + " references a non-incident vertex");
    }
    if (p.index < 1 || p.index > vertices_[static_cast<size_t>(p.vertex)].size()) {
      throw DataError("point index " + std::to_string(p.index) + " out of range for vertex '" +
                      vertices_[static_cast<size_t>(p.vertex)].name + "'");
    }
  };
  for (const auto& e : edges_) {
    for (const auto& c : e.constraints) {
      check_ref(c.left, e);
      check_ref(c.right, e);
      if (c.left.vertex == c.right.vertex) {
        throw DataError("edge constraint must relate a point of the parent to a point of the child");
      }
    }
  }
  // Gadget shape.
  for (int v = 0; v < m; ++v) {
    const auto& vx = vertices_[static_cast<size_t>(v)];
    if (!vx.is_gadget()) continue;
    const int pe = parent_edge(v);
    if (pe >= 0) {
      for (const auto& c : edges_[static_cast<size_t>(pe)].constraints) {
        const PointRef& mine = c.left.vertex == v ? c.left : c.right;
        if (mine.index != vx.mark) {
          throw DataError("gadget vertex '" + vx.name + "': incoming edge may only constrain the marked point");
        }
      }
    }
    const auto outs = child_edges(v);
    if (vx.size() == 5 && !outs.empty()) throw DataError("gadget vertex '" + vx.name + "' of size 5 must be a leaf");
    for (int oe : outs) {
      const auto& cs = edges_[static_cast<size_t>(oe)].constraints;
      if (cs.size() != 1 || cs[0].kind != EdgeConstraint::Kind::equal) {
        throw DataError("gadget vertex '" + vx.name + "': outgoing edges must be a single equality");
      }
    }
  }
}

namespace {

std::string ref_text(const PatternTree& t, const PointRef& p) {
  return t.vertex(p.vertex).name + "." + std::to_string(p.index);
}

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string PatternTree::to_text() const {
  std::string out;
  for (const auto& v : vertices_) {
    out += "vertex " + v.name + " ";
    if (v.is_gadget()) {
      out += "gadget " + v.label.to_string() + " mark " + std::to_string(v.mark);
    } else {
      out += v.label.to_string();
    }
    out += "\n";
  }
  if (!vertices_.empty()) out += "root " + vertices_[static_cast<size_t>(root_)].name + "\n";
  for (const auto& e : edges_) {
    out += "edge " + vertices_[static_cast<size_t>(e.parent)].name + " " + vertices_[static_cast<size_t>(e.child)].name +
           " :";
    for (size_t i = 0; i < e.constraints.size(); ++i) {
      const auto& c = e.constraints[i];
      out += i == 0 ? " " : ", ";
      if (c.kind == EdgeConstraint::Kind::equal) {
        out += "p " + ref_text(*this, c.left) + " = p " + ref_text(*this, c.right);
      } else {
        const char* a = c.axis == Axis::x ? "x " : "y ";
        out += a + ref_text(*this, c.left) + " < " + a + ref_text(*this, c.right);
      }
    }
    out += "\n";
  }
  return out;
}

PatternTree PatternTree::parse(std::string_view text) {
  PatternTree t;
  std::map<std::string, int> ids;
  std::string root_name;
  struct PendingEdge {
    int line;
    std::string parent, child, body;
  };
  std::vector<PendingEdge> pending;

  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto fail = [&](const std::string& msg) -> DataError {
      return DataError("pattern tree line " + std::to_string(line_no) + ": " + msg);
    };
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto words = split_words(body);
    const std::string& kw = words[0];
    if (kw == "vertex") {
      if (words.size() < 3) throw fail("expected 'vertex <name> <pattern>'");
      const std::string& name = words[1];
      if (ids.count(name)) throw fail("duplicate vertex name '" + name + "'");
      try {
        if (words[2] == "gadget") {
          const auto mark_at = std::find(words.begin() + 3, words.end(), "mark");
          if (mark_at == words.end() || mark_at + 2 != words.end() || mark_at == words.begin() + 3) {
            throw fail("expected 'vertex <name> gadget <pattern> mark <index>'");
          }
          std::string pattern;
          for (auto it = words.begin() + 3; it != mark_at; ++it) pattern += *it + " ";
          ids[name] = t.add_gadget_vertex(name, parse_pattern(pattern), std::stoi(*(mark_at + 1)));
        } else {
          std::string pattern;
          for (auto it = words.begin() + 2; it != words.end(); ++it) pattern += *it + " ";
          ids[name] = t.add_vertex(name, parse_pattern(pattern));
        }
      } catch (const DataError& e) {
        if (std::string(e.what()).rfind("pattern tree line", 0) == 0) throw;
        throw fail(e.what());
      } catch (const std::logic_error&) {
        throw fail("malformed mark");
      }
    } else if (kw == "root") {
      if (words.size() != 2) throw fail("expected 'root <name>'");
      root_name = words[1];
    } else if (kw == "edge") {
      const size_t colon = body.find(':');
      if (colon == std::string::npos) throw fail("expected 'edge <parent> <child> : <constraints>'");
      const auto head = split_words(body.substr(0, colon));
      if (head.size() != 3) throw fail("expected 'edge <parent> <child> : <constraints>'");
      pending.push_back({static_cast<int>(line_no), head[1], head[2], body.substr(colon + 1)});
    } else {
      throw fail("unknown statement '" + kw + "'");
    }
  }
  if (t.vertices_.empty()) throw DataError("pattern tree has no vertices");

  for (const auto& pe : pending) {
    const auto fail = [&](const std::string& msg) {
      return DataError("pattern tree line " + std::to_string(pe.line) + ": " + msg);
    };
    const auto find_vertex = [&](const std::string& name) {
      auto it = ids.find(name);
      if (it == ids.end()) throw fail("unknown vertex '" + name + "'");
      return it->second;
    };
    const int parent = find_vertex(pe.parent);
    const int child = find_vertex(pe.child);
    const auto parse_ref = [&](const std::string& s) {
      const size_t dot = s.rfind('.');
      if (dot == std::string::npos) throw fail("point reference '" + s + "' must look like name.index");
      PointRef r;
      r.vertex = find_vertex(s.substr(0, dot));
      try {
        size_t used = 0;
        r.index = std::stoi(s.substr(dot + 1), &used);
        if (used != s.size() - dot - 1) throw std::invalid_argument("trailing");
      } catch (const std::logic_error&) {
        throw fail("bad point index in '" + s + "'");
      }
      return r;
    };
    std::vector<EdgeConstraint> cs;
    std::string atoms = pe.body;
    std::stringstream ss(atoms);
    std::string atom;
    while (std::getline(ss, atom, ',')) {
      const auto w = split_words(atom);
      if (w.empty()) throw fail("empty constraint");
      if (w.size() == 1) {
        static const std::map<std::string, Corner> corners{
            {"NE", Corner::NE}, {"NW", Corner::NW}, {"SE", Corner::SE}, {"SW", Corner::SW}};
        auto it = corners.find(w[0]);
        if (it == corners.end()) throw fail("unknown constraint '" + w[0] + "'");
        if (t.vertex(parent).size() != 1 || t.vertex(child).size() != 1) {
          throw fail("corner labels require size-1 vertices");
        }
        for (auto& c : corner_constraints(it->second, parent, child)) cs.push_back(c);
        continue;
      }
      if (w.size() != 5) throw fail("malformed constraint '" + trim(atom) + "'");
      const std::string& op = w[2];
      if (w[0] != w[3]) throw fail("both sides of '" + trim(atom) + "' must use the same coordinate");
      const PointRef a = parse_ref(w[1]);
      const PointRef b = parse_ref(w[4]);
      if (op == "=") {
        if (w[0] != "p") throw fail("equalities are written 'p u.i = p v.j'");
        cs.push_back(EdgeConstraint::equal(a, b));
      } else if (op == "<" || op == ">") {
        Axis axis;
        if (w[0] == "x") {
          axis = Axis::x;
        } else if (w[0] == "y") {
          axis = Axis::y;
        } else {
          throw fail("inequalities compare 'x' or 'y' coordinates");
        }
        cs.push_back(op == "<" ? EdgeConstraint::less_than(axis, a, b) : EdgeConstraint::less_than(axis, b, a));
      } else {
        throw fail("unknown relation '" + op + "'");
      }
    }
    t.add_edge(parent, child, std::move(cs));
  }
  if (!root_name.empty()) {
    auto it = ids.find(root_name);
    if (it == ids.end()) throw DataError("pattern tree: unknown root '" + root_name + "'");
    t.root_ = it->second;
  }
  t.validate();
  return t;
}

bool operator==(const PatternTree& a, const PatternTree& b) {
  if (a.root_ != b.root_ || a.vertices_.size() != b.vertices_.size() || a.edges_.size() != b.edges_.size()) {
    return false;
  }
  for (size_t i = 0; i < a.vertices_.size(); ++i) {
    const auto& x = a.vertices_[i];
    const auto& y = b.vertices_[i];
    if (x.name != y.name || x.label != y.label || x.mark != y.mark) return false;
  }
  for (size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.parent != y.parent || x.child != y.child || x.constraints != y.constraints) return false;
  }
  return true;
}

TreeConstraints constraints_of(const PatternTree& t) {
  const int m = t.total_size();
  if (m > 32) throw GuardError("pattern tree has more than 32 points");
  TreeConstraints out{Poset(m), Poset(m), {}, 0};
  std::vector<int> offset(static_cast<size_t>(t.vertex_count()), 0);
  for (int v = 1; v < t.vertex_count(); ++v) offset[static_cast<size_t>(v)] = offset[static_cast<size_t>(v - 1)] + t.vertex(v - 1).size();
  const auto id = [&](PointRef p) { return offset[static_cast<size_t>(p.vertex)] + p.index - 1; };

  for (int v = 0; v < t.vertex_count(); ++v) {
    const Permutation& tau = t.vertex(v).label;
    const int r = tau.size();
    const int base = offset[static_cast<size_t>(v)];
    for (int i = 1; i < r; ++i) out.x.add_less(base + i - 1, base + i);
    const Permutation inv = tau.inverse();
    for (int val = 1; val < r; ++val) out.y.add_less(base + inv(val) - 1, base + inv(val + 1) - 1);
  }
  std::vector<int> uf(static_cast<size_t>(m));
  std::iota(uf.begin(), uf.end(), 0);
  const auto find = [&](int a) {
    while (uf[static_cast<size_t>(a)] != a) a = uf[static_cast<size_t>(a)] = uf[static_cast<size_t>(uf[static_cast<size_t>(a)])];
    return a;
  };
  for (const auto& e : t.edges()) {
    for (const auto& c : e.constraints) {
      if (c.kind == EdgeConstraint::Kind::equal) {
        const int a = find(id(c.left));
        const int b = find(id(c.right));
        if (a != b) uf[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      } else {
        (c.axis == Axis::x ? out.x : out.y).add_less(id(c.left), id(c.right));
      }
    }
  }
  out.class_of.assign(static_cast<size_t>(m), -1);
  std::vector<int> class_index(static_cast<size_t>(m), -1);
  for (int p = 0; p < m; ++p) {
    const int rep = find(p);
    if (class_index[static_cast<size_t>(rep)] < 0) class_index[static_cast<size_t>(rep)] = out.class_count++;
    out.class_of[static_cast<size_t>(p)] = class_index[static_cast<size_t>(rep)];
  }
  return out;
}

}  // namespace pattree
