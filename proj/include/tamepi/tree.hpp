#ifndef TAMEPI_TREE_HPP_
#define TAMEPI_TREE_HPP_

// Stable marked reduction of the projective line with r rational marks at a
// prime p: the rooted tree of components, node thicknesses, mark placement,
// and the interval relabeling of the marks.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace tamepi {

  ////////////////////////////////////////////////////////////////////////
  // Points of P^1(Q)
  ////////////////////////////////////////////////////////////////////////

  class PPoint {
   public:
    PPoint(Rational v) : value_(std::move(v)) {}  // NOLINT(runtime/explicit)
    PPoint(long long v) : value_(Rational(v)) {}   // NOLINT(runtime/explicit)

    static PPoint infinity() {
      PPoint pt(0);
      pt.value_.reset();
      return pt;
    }

    bool is_infinity() const noexcept {
      return !value_.has_value();
    }

    Rational const& value() const {
      if (!value_) {
        throw Error("point at infinity has no finite coordinate");
      }
      return *value_;
    }

    std::string to_string() const {
      return value_ ? value_->to_string() : "inf";
    }

    static PPoint parse(std::string_view s) {
      if (s == "inf" || s == "infinity" || s == "oo") {
        return infinity();
      }
      return PPoint(Rational::parse(s));
    }

    friend bool operator==(PPoint const&, PPoint const&) = default;

   private:
    std::optional<Rational> value_;
  };

  inline bool is_p_integral(PPoint const& x, Prime p) {
    return !x.is_infinity() && (x.value().is_zero() || valuation(x.value(), p) >= 0);
  }

  // z -> (a z + b) / (c z + d)
  struct Mobius {
    Rational a = 1, b = 0, c = 0, d = 1;

    static Mobius identity() {
      return Mobius{};
    }

    // z -> (z - center) / p^depth
    static Mobius recentre(Rational const& center, Prime p, long depth) {
      Rational scale = depth >= 0
                           ? Rational(power(p.big(), static_cast<unsigned long>(depth)))
                           : Rational(1, power(p.big(), static_cast<unsigned long>(-depth)));
      return Mobius{1, -center, 0, scale};
    }

    bool is_identity() const {
      return a == 1 && b == 0 && c == 0 && d == 1;
    }

    bool invertible() const {
      return a * d - b * c != 0;
    }

    PPoint apply(PPoint const& z) const {
      if (z.is_infinity()) {
        if (c.is_zero()) {
          return PPoint::infinity();
        }
        return a / c;
      }
      Rational den = c * z.value() + d;
      if (den.is_zero()) {
        return PPoint::infinity();
      }
      return (a * z.value() + b) / den;
    }

    friend bool operator==(Mobius const&, Mobius const&) = default;
  };

  namespace detail {
    inline void check_distinct(std::span<PPoint const> points) {
      for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
          if (points[i] == points[j]) {
            throw Error("points " + std::to_string(i + 1) + " and "
                        + std::to_string(j + 1) + " coincide ("
                        + points[i].to_string() + ")");
          }
        }
      }
    }
  }  // namespace detail

  // Intersection number of the closures of a and b in P^1 over Z_p. Points
  // reducing to infinity are compared in the chart z -> 1/z.
  inline long intersection_number(PPoint const& a, PPoint const& b, Prime p) {
    if (a == b) {
      throw Error("intersection number of a point with itself is infinite");
    }
    bool ia = is_p_integral(a, p);
    bool ib = is_p_integral(b, p);
    if (ia != ib) {
      return 0;
    }
    if (ia) {
      return std::max(0L, valuation(a.value() - b.value(), p));
    }
    Rational wa = a.is_infinity() ? Rational(0) : a.value().inverse();
    Rational wb = b.is_infinity() ? Rational(0) : b.value().inverse();
    return std::max(0L, valuation(wa - wb, p));
  }

  using IntersectionMatrix = std::vector<std::vector<long>>;

  inline IntersectionMatrix intersection_matrix(std::span<PPoint const> points, Prime p) {
    std::size_t        r = points.size();
    IntersectionMatrix e(r, std::vector<long>(r, 0));
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = i + 1; j < r; ++j) {
        e[i][j] = e[j][i] = intersection_number(points[i], points[j], p);
      }
    }
    return e;
  }

  namespace detail {
    // Classes of `members` under e >= threshold; an equivalence relation
    // because intersection numbers satisfy the ultrametric inequality.
    inline std::vector<std::vector<std::size_t>> split(IntersectionMatrix const&       e,
                                                       std::vector<std::size_t> const& members,
                                                       long threshold) {
      std::vector<std::vector<std::size_t>> classes;
      for (std::size_t i : members) {
        bool placed = false;
        for (auto& cls : classes) {
          if (e[cls.front()][i] >= threshold) {
            cls.push_back(i);
            placed = true;
            break;
          }
        }
        if (!placed) {
          classes.push_back({i});
        }
      }
      return classes;
    }

    inline std::vector<std::size_t> iota(std::size_t n) {
      std::vector<std::size_t> v(n);
      std::iota(v.begin(), v.end(), std::size_t(0));
      return v;
    }
  }  // namespace detail

  // Number of residue classes of P^1(F_p) met by the reductions of the points.
  inline std::size_t residue_directions(std::span<PPoint const> points, Prime p) {
    auto e = intersection_matrix(points, p);
    return detail::split(e, detail::iota(points.size()), 1).size();
  }

  ////////////////////////////////////////////////////////////////////////
  // Normalisation
  ////////////////////////////////////////////////////////////////////////

  struct Normalization {
    Mobius              map;
    std::vector<PPoint> points;
  };

  namespace detail {
    inline std::vector<PPoint> transform(Mobius const& m, std::span<PPoint const> points) {
      std::vector<PPoint> out;
      out.reserve(points.size());
      for (PPoint const& z : points) {
        out.push_back(m.apply(z));
      }
      return out;
    }

    inline void check_configuration(std::span<PPoint const> points) {
      if (points.size() < 3) {
        throw Error("stable marked reduction requires at least 3 marks");
      }
      check_distinct(points);
    }

    // The disc D(center, p^-depth) in the closed-disc sense.
    struct Disc {
      Rational center;
      long     depth;
    };

    inline bool same_disc(Disc const& x, Disc const& y, Prime p) {
      if (x.depth != y.depth) {
        return false;
      }
      Rational diff = x.center - y.center;
      return diff.is_zero() || valuation(diff, p) >= x.depth;
    }

    // Every branch point of the convex hull of the marks is one of these
    // discs, so some candidate always yields a stable original component.
    inline std::vector<Disc> candidate_discs(std::span<PPoint const> points, Prime p) {
      std::vector<Disc> discs{Disc{0, 0}};
      for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].is_infinity()) {
          continue;
        }
        std::set<long> depths;
        for (std::size_t j = 0; j < points.size(); ++j) {
          if (j != i && !points[j].is_infinity()) {
            depths.insert(valuation(points[j].value() - points[i].value(), p));
          }
        }
        for (long d : depths) {
          Disc cand{points[i].value(), d};
          bool seen = std::any_of(discs.begin(), discs.end(), [&](Disc const& x) {
            return same_disc(x, cand, p);
          });
          if (!seen) {
            discs.push_back(cand);
          }
        }
      }
      return discs;
    }

    inline Mobius disc_map(Disc const& disc, Prime p) {
      if (disc.center.is_zero() && disc.depth == 0) {
        return Mobius::identity();
      }
      return Mobius::recentre(disc.center, p, disc.depth);
    }
  }  // namespace detail

  // All coordinate changes z -> (z - a_i)/p^d that leave the marks in at
  // least three residue directions, one per distinct disc, identity first
  // when it qualifies.
  inline std::vector<Normalization> valid_normalizations(std::span<PPoint const> points,
                                                         Prime                   p) {
    detail::check_configuration(points);
    std::vector<Normalization> out;
    for (auto const& disc : detail::candidate_discs(points, p)) {
      Mobius m   = detail::disc_map(disc, p);
      auto   pts = detail::transform(m, points);
      if (residue_directions(pts, p) >= 3) {
        out.push_back(Normalization{m, std::move(pts)});
      }
    }
    return out;
  }

  inline Normalization normalize(std::span<PPoint const> points, Prime p) {
    detail::check_configuration(points);
    if (residue_directions(points, p) >= 3) {
      return Normalization{Mobius::identity(), {points.begin(), points.end()}};
    }
    auto valid = valid_normalizations(points, p);
    if (valid.empty()) {
      // unreachable for >= 3 distinct points
      throw Error("no coordinate change stabilises the original component");
    }
    return valid.front();
  }

  ////////////////////////////////////////////////////////////////////////
  // Marked trees
  ////////////////////////////////////////////////////////////////////////

  struct TreeEdge {
    int  child;
    int  parent;
    long thickness;

    friend bool operator==(TreeEdge const&, TreeEdge const&) = default;
  };

  // Marks carry interval labels 1..r; order[k-1] is the input index of the
  // mark labelled k. Vertex ids are arbitrary distinct integers.
  struct MarkedTree {
    std::vector<int>         vertices;
    int                      root = 0;
    std::vector<TreeEdge>    edges;
    std::vector<int>         marks;
    std::vector<std::size_t> order;
    Mobius                   normalization;

    std::size_t rank() const noexcept {
      return marks.size();
    }

    friend bool operator==(MarkedTree const&, MarkedTree const&) = default;
  };

  inline std::vector<std::size_t> identity_order(std::size_t r) {
    std::vector<std::size_t> v(r);
    std::iota(v.begin(), v.end(), std::size_t(1));
    return v;
  }

  // Problems with the tree shape itself (ids, parent edges, connectivity,
  // thickness positivity, mark targets, order).
  inline std::vector<std::string> structure_violations(MarkedTree const& t) {
    std::vector<std::string> out;
    std::set<int>            ids;
    for (int v : t.vertices) {
      if (!ids.insert(v).second) {
        out.push_back("duplicate vertex id " + std::to_string(v));
      }
    }
    if (!ids.contains(t.root)) {
      out.push_back("root " + std::to_string(t.root) + " is not a vertex");
    }
    std::map<int, int> parent;
    for (TreeEdge const& e : t.edges) {
      std::string name = std::to_string(e.child) + "-" + std::to_string(e.parent);
      if (!ids.contains(e.child) || !ids.contains(e.parent)) {
        out.push_back("edge " + name + " references an unknown vertex");
        continue;
      }
      if (e.child == e.parent) {
        out.push_back("edge " + name + " is a loop");
        continue;
      }
      if (e.thickness < 1) {
        out.push_back("edge " + name + " has thickness "
                      + std::to_string(e.thickness) + " < 1");
      }
      if (e.child == t.root) {
        out.push_back("root " + std::to_string(t.root) + " has a parent edge");
      } else if (!parent.emplace(e.child, e.parent).second) {
        out.push_back("vertex " + std::to_string(e.child) + " has more than one parent edge");
      }
    }
    for (int v : ids) {
      if (v == t.root) {
        continue;
      }
      if (!parent.contains(v)) {
        out.push_back("vertex " + std::to_string(v) + " has no parent edge");
        continue;
      }
      int         u     = v;
      std::size_t steps = 0;
      while (u != t.root && parent.contains(u) && steps <= ids.size()) {
        u = parent[u];
        ++steps;
      }
      if (u != t.root) {
        out.push_back("vertex " + std::to_string(v) + " is not connected to the root");
      }
    }
    if (t.marks.empty()) {
      out.push_back("tree carries no marks");
    }
    for (std::size_t k = 0; k < t.marks.size(); ++k) {
      if (!ids.contains(t.marks[k])) {
        out.push_back("mark " + std::to_string(k + 1) + " sits on unknown vertex "
                      + std::to_string(t.marks[k]));
      }
    }
    auto sorted = t.order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != identity_order(t.marks.size())) {
      out.push_back("order is not a permutation of 1.." + std::to_string(t.marks.size()));
    }
    return out;
  }

  // Read-only adjacency view over a structurally valid MarkedTree.
  class TreeView {
   public:
    explicit TreeView(MarkedTree const& t) : tree_(&t) {
      auto bad = structure_violations(t);
      if (!bad.empty()) {
        throw Error("malformed tree: " + bad.front());
      }
      for (std::size_t i = 0; i < t.vertices.size(); ++i) {
        index_[t.vertices[i]] = i;
      }
      std::size_t n = t.vertices.size();
      parent_.assign(n, -1);
      thickness_.assign(n, 0);
      children_.assign(n, {});
      marks_at_.assign(n, {});
      for (TreeEdge const& e : t.edges) {
        std::size_t c = index_.at(e.child);
        parent_[c]    = static_cast<long>(index_.at(e.parent));
        thickness_[c] = e.thickness;
        children_[index_.at(e.parent)].push_back(c);
      }
      for (std::size_t k = 0; k < t.marks.size(); ++k) {
        marks_at_[index_.at(t.marks[k])].push_back(k + 1);
      }
      subtree_.assign(n, {});
      fill_subtree(index_.at(t.root));
      for (auto& ch : children_) {
        std::sort(ch.begin(), ch.end(), [&](std::size_t x, std::size_t y) {
          return min_mark(x) < min_mark(y);
        });
      }
    }

    MarkedTree const& tree() const noexcept {
      return *tree_;
    }
    std::size_t size() const noexcept {
      return tree_->vertices.size();
    }
    std::size_t root() const {
      return index_.at(tree_->root);
    }
    std::size_t index_of(int id) const {
      return index_.at(id);
    }
    int id(std::size_t v) const {
      return tree_->vertices[v];
    }
    bool is_root(std::size_t v) const {
      return parent_[v] < 0;
    }
    std::size_t parent(std::size_t v) const {
      return static_cast<std::size_t>(parent_[v]);
    }
    long thickness(std::size_t v) const {
      return thickness_[v];
    }
    // Children ordered by the smallest mark label in their subtree.
    std::vector<std::size_t> const& children(std::size_t v) const {
      return children_[v];
    }
    std::vector<std::size_t> const& marks_at(std::size_t v) const {
      return marks_at_[v];
    }
    // Sorted labels of all marks in the subtree below v.
    std::vector<std::size_t> const& subtree_marks(std::size_t v) const {
      return subtree_[v];
    }
    std::size_t vertex_of_mark(std::size_t k) const {
      return index_.at(tree_->marks.at(k - 1));
    }
    std::size_t degree(std::size_t v) const {
      return children_[v].size() + (is_root(v) ? 0 : 1);
    }

    // Vertices with every parent before its children, siblings by smallest mark.
    std::vector<std::size_t> preorder() const {
      std::vector<std::size_t> out;
      std::vector<std::size_t> stack{root()};
      while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (auto it = children_[v].rbegin(); it != children_[v].rend(); ++it) {
          stack.push_back(*it);
        }
      }
      return out;
    }

   private:
    std::size_t min_mark(std::size_t v) const {
      return subtree_[v].empty() ? static_cast<std::size_t>(-1) : subtree_[v].front();
    }

    void fill_subtree(std::size_t v) {
      auto& s = subtree_[v];
      s       = marks_at_[v];
      for (std::size_t c : children_[v]) {
        fill_subtree(c);
        s.insert(s.end(), subtree_[c].begin(), subtree_[c].end());
      }
      std::sort(s.begin(), s.end());
    }

    MarkedTree const*                     tree_;
    std::map<int, std::size_t>            index_;
    std::vector<long>                     parent_;
    std::vector<long>                     thickness_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::vector<std::size_t>> marks_at_;
    std::vector<std::vector<std::size_t>> subtree_;
  };

  // Full invariant check for trees produced by build_tree: structure,
  // stability at every vertex, and every non-root subtree an interval of
  // labels.
  inline std::vector<std::string> marked_tree_violations(MarkedTree const& t) {
    auto out = structure_violations(t);
    if (!out.empty()) {
      return out;
    }
    TreeView view(t);
    for (std::size_t v = 0; v < view.size(); ++v) {
      std::size_t count = view.degree(v) + view.marks_at(v).size();
      if (count < 3) {
        out.push_back("vertex " + std::to_string(view.id(v))
                      + " below stability bound: " + std::to_string(count) + " < 3");
      }
      if (!view.is_root(v)) {
        auto const& s = view.subtree_marks(v);
        if (s.empty() || s.size() == t.rank()) {
          out.push_back("vertex " + std::to_string(view.id(v))
                        + " does not carry a proper nonempty mark set");
        } else if (s.back() - s.front() + 1 != s.size()) {
          out.push_back("marks below vertex " + std::to_string(view.id(v))
                        + " are not an interval");
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Construction
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    struct Builder {
      IntersectionMatrix const& e;
      MarkedTree&               tree;
      std::vector<std::size_t>  input_of_label;  // label-1 -> input index (0-based)
      std::vector<int>          vertex_of_input;

      void visit(std::vector<std::size_t> const& members, long depth, int parent_id) {
        int id = static_cast<int>(tree.vertices.size());
        tree.vertices.push_back(id);
        if (parent_id >= 0) {
          tree.edges.push_back(TreeEdge{id, parent_id, 0});
        }
        auto        classes   = split(e, members, depth + 1);
        std::sort(classes.begin(), classes.end(), [](auto const& x, auto const& y) {
          return *std::min_element(x.begin(), x.end())
                 < *std::min_element(y.begin(), y.end());
        });
        for (auto& cls : classes) {
          std::sort(cls.begin(), cls.end());
          if (cls.size() == 1) {
            input_of_label.push_back(cls.front());
            vertex_of_input[cls.front()] = id;
            continue;
          }
          long child_depth = e[cls[0]][cls[1]];
          for (std::size_t i = 0; i < cls.size(); ++i) {
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
              child_depth = std::min(child_depth, e[cls[i]][cls[j]]);
            }
          }
          std::size_t slot = tree.edges.size();
          visit(cls, child_depth, id);
          tree.edges[slot].thickness = child_depth - depth;
        }
      }
    };
  }  // namespace detail

  // Builds the tree after applying the given coordinate change. Throws when
  // the original component is unstable in the new coordinate.
  inline MarkedTree build_tree(std::span<PPoint const> points, Prime p, Mobius const& m) {
    detail::check_configuration(points);
    if (!m.invertible()) {
      throw Error("coordinate change is not invertible");
    }
    auto pts = detail::transform(m, points);
    auto e   = intersection_matrix(pts, p);
    auto top = detail::split(e, detail::iota(pts.size()), 1);
    if (top.size() < 3) {
      throw Error("original component is unstable: marks occupy "
                  + std::to_string(top.size()) + " residue direction(s)");
    }
    MarkedTree tree;
    tree.root          = 0;
    tree.normalization = m;
    detail::Builder b{e, tree, {}, std::vector<int>(pts.size(), -1)};
    b.visit(detail::iota(pts.size()), 0, -1);
    tree.marks.resize(pts.size());
    tree.order.resize(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      std::size_t input = b.input_of_label[k];
      tree.marks[k]     = b.vertex_of_input[input];
      tree.order[k]     = input + 1;
    }
    return tree;
  }

  inline MarkedTree build_tree(std::span<PPoint const> points, Prime p) {
    return build_tree(points, p, normalize(points, p).map);
  }

  inline MarkedTree build_tree(std::vector<PPoint> const& points, Prime p) {
    return build_tree(std::span<PPoint const>(points), p);
  }

  struct ChainLink {
    std::vector<std::size_t> marks;
    long                     thickness;

    friend bool operator==(ChainLink const&, ChainLink const&) = default;
  };

  // Edges from the vertex holding mark i up to the root, innermost first;
  // each link carries the mark labels below that edge and its thickness.
  inline std::vector<ChainLink> chain(MarkedTree const& tree, std::size_t i) {
    if (i < 1 || i > tree.rank()) {
      throw Error("mark index " + std::to_string(i) + " out of range 1.."
                  + std::to_string(tree.rank()));
    }
    TreeView               view(tree);
    std::vector<ChainLink> out;
    for (std::size_t v = view.vertex_of_mark(i); !view.is_root(v); v = view.parent(v)) {
      out.push_back(ChainLink{view.subtree_marks(v), view.thickness(v)});
    }
    return out;
  }

  // Same tree with every thickness multiplied by n.
  inline MarkedTree scale_thickness(MarkedTree tree, long n) {
    if (n < 1) {
      throw Error("thickness scale must be positive");
    }
    for (TreeEdge& e : tree.edges) {
      e.thickness *= n;
    }
    return tree;
  }

  inline bool is_single_vertex(MarkedTree const& tree) {
    return tree.edges.empty();
  }

  ////////////////////////////////////////////////////////////////////////
  // Local data and isomorphism
  ////////////////////////////////////////////////////////////////////////

  struct LocalData {
    MarkedTree tree;
    Prime      prime;
  };

  // Empty result means valid.
  inline std::vector<std::string> validate_local_data(LocalData const& ld) {
    auto out = structure_violations(ld.tree);
    if (!out.empty()) {
      return out;
    }
    TreeView  view(ld.tree);
    long long cap = ld.prime.value() + 1;
    for (std::size_t v = 0; v < view.size(); ++v) {
      long long count = static_cast<long long>(view.degree(v) + view.marks_at(v).size());
      if (count < 3) {
        out.push_back("vertex below stability bound: vertex " + std::to_string(view.id(v))
                      + " has deg + marks = " + std::to_string(count) + " < 3");
      }
      if (count > cap) {
        out.push_back("vertex above p+1 bound: vertex " + std::to_string(view.id(v))
                      + " has deg + marks = " + std::to_string(count) + " > "
                      + std::to_string(cap));
      }
    }
    return out;
  }

  namespace detail {
    inline std::string canonical(TreeView const& view, std::size_t v) {
      auto const&              order = view.tree().order;
      std::vector<std::size_t> labels;
      for (std::size_t k : view.marks_at(v)) {
        labels.push_back(order[k - 1]);
      }
      std::sort(labels.begin(), labels.end());
      std::vector<std::string> kids;
      for (std::size_t c : view.children(v)) {
        kids.push_back(std::to_string(view.thickness(c)) + ":" + canonical(view, c));
      }
      std::sort(kids.begin(), kids.end());
      std::string s = "(";
      for (std::size_t l : labels) {
        s += std::to_string(l) + ",";
      }
      s += "|";
      for (auto const& k : kids) {
        s += k;
      }
      return s + ")";
    }
  }  // namespace detail

  // Rooted shape with thicknesses and marks named by their input index;
  // equal strings <=> isomorphic marked trees.
  inline std::string canonical_form(MarkedTree const& tree) {
    TreeView view(tree);
    return detail::canonical(view, view.root());
  }

  inline bool isomorphic(MarkedTree const& a, MarkedTree const& b) {
    return a.rank() == b.rank() && canonical_form(a) == canonical_form(b);
  }

}  // namespace tamepi

#endif  // TAMEPI_TREE_HPP_
