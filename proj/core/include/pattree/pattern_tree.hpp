#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pattree/permutation.hpp"
#include "pattree/poset.hpp"

namespace pattree {

/// Point variable p_v^index of a pattern tree (vertex id, 1-based index).
struct PointRef {
  int vertex = 0;
  int index = 1;
  friend auto operator<=>(const PointRef&, const PointRef&) = default;
};

enum class Axis : unsigned char { x, y };

/// One edge label atom: either `axis(left) < axis(right)` or `p(left) = p(right)`.
struct EdgeConstraint {
  enum class Kind : unsigned char { less, equal };
  Kind kind = Kind::less;
  Axis axis = Axis::x;  // ignored for equalities
  PointRef left;
  PointRef right;

  static EdgeConstraint less_than(Axis axis, PointRef left, PointRef right) {
    return {Kind::less, axis, left, right};
  }
  static EdgeConstraint equal(PointRef a, PointRef b) { return {Kind::equal, Axis::x, a, b}; }
  friend auto operator<=>(const EdgeConstraint&, const EdgeConstraint&) = default;
};

struct TreeVertex {
  std::string name;
  Permutation label;
  /// 0 for an ordinary vertex; otherwise the marked index of a gadget vertex.
  int mark = 0;
  [[nodiscard]] bool is_gadget() const noexcept { return mark != 0; }
  [[nodiscard]] int size() const noexcept { return label.size(); }
};

struct TreeEdge {
  int parent = 0;
  int child = 0;
  std::vector<EdgeConstraint> constraints;
};

/// Corner directions: the child point lies NE/NW/SE/SW of the parent point.
enum class Corner : unsigned char { NE, NW, SE, SW };
/// The two inequalities of a corner edge between size-1 vertices.
std::vector<EdgeConstraint> corner_constraints(Corner c, int parent, int child);

/// Rooted tree with permutation-labelled vertices and constraint-labelled
/// edges, oriented away from the root.
///
/// Text format (one statement per line, `#` starts a comment):
///
///     vertex <name> <pattern>
///     vertex <name> gadget <pattern> mark <index>
///     root <name>                      (defaults to the first vertex)
///     edge <parent> <child> : <atom>, <atom>, ...
///
/// Patterns use one-line notation ("132" or "1 3 2"). Atoms are
/// `x u.2 < x v.1`, `y v.1 > y u.3` (stored as the mirrored `<`), and
/// `p u.2 = p v.1`. An edge between size-one vertices may instead be labelled
/// with one of NE, NW, SE, SW, meaning the child lies in that quadrant of the
/// parent.
class PatternTree {
 public:
  PatternTree() = default;

  int add_vertex(std::string name, Permutation label);
  int add_gadget_vertex(std::string name, Permutation label, int mark);
  void add_edge(int parent, int child, std::vector<EdgeConstraint> constraints);
  void set_root(int vertex);

  [[nodiscard]] int vertex_count() const noexcept { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] const TreeVertex& vertex(int v) const { return vertices_.at(static_cast<size_t>(v)); }
  [[nodiscard]] const std::vector<TreeVertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const std::vector<TreeEdge>& edges() const noexcept { return edges_; }
  [[nodiscard]] int root() const noexcept { return root_; }
  /// Indices into edges() of the edges leaving v.
  [[nodiscard]] std::vector<int> child_edges(int v) const;
  /// Index into edges() of the edge entering v, or -1 for the root.
  [[nodiscard]] int parent_edge(int v) const;
  /// Vertices in post-order (children before parents).
  [[nodiscard]] std::vector<int> post_order() const;

  /// s(T): the largest vertex size.
  [[nodiscard]] int max_size() const;
  /// Sigma(T): the sum of vertex sizes.
  [[nodiscard]] int total_size() const;
  [[nodiscard]] bool has_gadgets() const;

  /// Global index of a point variable in [0, total_size()).
  [[nodiscard]] int point_id(PointRef p) const;
  [[nodiscard]] PointRef point_ref(int id) const;

  /// Structural checks (connectivity, acyclicity, index bounds, constraint
  /// endpoints, gadget shape). Throws DataError.
  void validate() const;

  [[nodiscard]] std::string to_text() const;
  /// Parses and validates. Throws DataError with a line number.
  static PatternTree parse(std::string_view text);

  friend bool operator==(const PatternTree& a, const PatternTree& b);

 private:
  std::vector<TreeVertex> vertices_;
  std::vector<TreeEdge> edges_;
  int root_ = 0;
};

/// True when `label` is a D4 image of 3214 or 43215 whose marked point is the
/// image of the canonical marked point (the last one).
struct GadgetOrientation {
  Permutation canonical;  // 3214 or 43215
  D4 g = D4::identity;    // label == g.canonical
};
/// Finds g with g.canonical == label and g mapping the canonical mark to
/// `mark`; throws DataError if none exists.
GadgetOrientation gadget_orientation(const Permutation& label, int mark);

/// The constraint system C(T): posets over the x and y coordinate variables
/// (indexed by point_id) and the partition of points induced by equalities.
struct TreeConstraints {
  Poset x;
  Poset y;
  /// class_of[point_id] = representative class index in [0, class_count).
  std::vector<int> class_of;
  int class_count = 0;
};
TreeConstraints constraints_of(const PatternTree& t);

}  // namespace pattree
