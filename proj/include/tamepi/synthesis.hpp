#ifndef TAMEPI_SYNTHESIS_HPP_
#define TAMEPI_SYNTHESIS_HPP_

// Rational points realizing prescribed local data at one or several primes,
// and branch loci whose field of moduli is unramified at given primes.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "perm_group.hpp"
#include "rational.hpp"
#include "tree.hpp"

namespace tamepi {

  // Digits used by the construction. Edge colors are keyed by child vertex
  // id; mark colors are indexed by label - 1. When the root carries p + 1
  // items its last item has no color (-1) and is sent to the residue
  // direction at infinity; split_child is then that item's vertex id if it
  // is an edge, otherwise -1.
  struct ColoringChoice {
    std::map<int, int> edge;
    std::vector<int>   mark;
    int                split_child = -1;
    bool               split_mark  = false;

    friend bool operator==(ColoringChoice const&, ColoringChoice const&) = default;
  };

  namespace detail {
    inline void require_valid(LocalData const& ld) {
      auto bad = validate_local_data(ld);
      if (!bad.empty()) {
        std::string msg = "invalid local data:";
        for (auto const& b : bad) {
          msg += " " + b + ";";
        }
        msg.pop_back();
        throw Error(msg);
      }
    }
  }  // namespace detail

  // Lexicographically least coloring: at each vertex the child edges (in
  // order of smallest mark) take 0, 1, ..., then the marks in increasing
  // order take the next colors.
  inline ColoringChoice choose_coloring(LocalData const& ld) {
    detail::require_valid(ld);
    TreeView       view(ld.tree);
    ColoringChoice c;
    c.mark.assign(ld.tree.rank(), -1);
    std::size_t root      = view.root();
    auto        p         = static_cast<std::size_t>(ld.prime.value());
    bool        overfull  = view.degree(root) + view.marks_at(root).size() == p + 1;
    if (overfull) {
      if (!view.children(root).empty()) {
        c.split_child = view.id(view.children(root).back());
      } else {
        c.split_mark = true;
      }
    }
    for (std::size_t v = 0; v < view.size(); ++v) {
      int  color = 0;
      bool top   = overfull && v == root;
      if (!top) {
        for (std::size_t ch : view.children(v)) {
          c.edge[view.id(ch)] = color++;
        }
        for (std::size_t k : view.marks_at(v)) {
          c.mark[k - 1] = color++;
        }
        continue;
      }
      // The item sent to infinity gets no color.
      auto const& kids = view.children(v);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (c.split_child != view.id(kids[i])) {
          c.edge[view.id(kids[i])] = color++;
        }
      }
      auto const& marks = view.marks_at(v);
      for (std::size_t i = 0; i < marks.size(); ++i) {
        if (!(c.split_mark && i + 1 == marks.size())) {
          c.mark[marks[i] - 1] = color++;
        }
      }
    }
    return c;
  }

  // Distinct colors among sibling edges and marks at each vertex, all in
  // 0..p-1; uncolored items only as described on ColoringChoice.
  inline std::vector<std::string> coloring_violations(LocalData const& ld,
                                                      ColoringChoice const& c) {
    std::vector<std::string> out;
    TreeView                 view(ld.tree);
    long long                p = ld.prime.value();
    for (std::size_t v = 0; v < view.size(); ++v) {
      std::set<int> used;
      auto          take = [&](int color, std::string const& what) {
        if (color < 0 || color >= p) {
          out.push_back(what + " has color " + std::to_string(color) + " outside 0.."
                        + std::to_string(p - 1));
        } else if (!used.insert(color).second) {
          out.push_back(what + " repeats color " + std::to_string(color) + " at vertex "
                        + std::to_string(view.id(v)));
        }
      };
      for (std::size_t ch : view.children(v)) {
        int id = view.id(ch);
        if (id == c.split_child && view.is_root(v)) {
          continue;
        }
        auto it = c.edge.find(id);
        take(it == c.edge.end() ? -1 : it->second, "edge to " + std::to_string(id));
      }
      auto const& marks = view.marks_at(v);
      for (std::size_t i = 0; i < marks.size(); ++i) {
        if (c.split_mark && view.is_root(v) && i + 1 == marks.size()) {
          continue;
        }
        take(c.mark.at(marks[i] - 1), "mark " + std::to_string(marks[i]));
      }
    }
    return out;
  }

  namespace detail {
    struct Digits {
      TreeView const&       view;
      ColoringChoice const& colors;
      BigInt                p;
      std::vector<Rational>& value;  // by label - 1
      long                   max_depth = 0;

      void walk(std::size_t v, BigInt const& prefix, long depth, bool skip_split) {
        max_depth = std::max(max_depth, depth);
        BigInt place = power(p, static_cast<unsigned long>(depth));
        for (std::size_t ch : view.children(v)) {
          if (skip_split && view.id(ch) == colors.split_child) {
            continue;
          }
          walk(ch, prefix + colors.edge.at(view.id(ch)) * place, depth + view.thickness(ch),
               false);
        }
        for (std::size_t k : view.marks_at(v)) {
          int color = colors.mark[k - 1];
          if (color >= 0) {
            value[k - 1] = Rational(prefix + color * place);
          }
        }
      }
    };

    // The split subtree is built with its top vertex as root and then moved
    // to the residue direction at infinity by z -> 1/(p^t z).
    inline void place_split(TreeView const& view, ColoringChoice const& c, Prime p,
                            std::vector<Rational>& value) {
      BigInt pb = p.big();
      if (c.split_mark) {
        std::size_t k = view.marks_at(view.root()).back();
        value[k - 1]  = Rational(1, pb);
        return;
      }
      std::size_t w = view.index_of(c.split_child);
      std::vector<Rational> sub(value.size());
      Digits                d{view, c, pb, sub};
      // The colors at w were assigned as for any non-root vertex.
      d.walk(w, 0, 0, false);
      BigInt shift = power(pb, static_cast<unsigned long>(d.max_depth + 1));
      BigInt scale = power(pb, static_cast<unsigned long>(view.thickness(w)));
      for (std::size_t k : view.subtree_marks(w)) {
        value[k - 1] = (Rational(scale) * (sub[k - 1] + Rational(shift))).inverse();
      }
    }
  }  // namespace detail

  // Points a_1..a_r whose stable marked reduction at p is ld.tree. Point
  // ld.tree.order[k-1] realizes the mark labelled k.
  inline std::vector<Rational> synthesize_one(LocalData const& ld) {
    ColoringChoice        c = choose_coloring(ld);
    TreeView              view(ld.tree);
    std::vector<Rational> by_label(ld.tree.rank());
    detail::Digits        d{view, c, ld.prime.big(), by_label};
    d.walk(view.root(), 0, 0, true);
    if (c.split_child >= 0 || c.split_mark) {
      detail::place_split(view, c, ld.prime, by_label);
    }
    std::vector<Rational> points(by_label.size());
    for (std::size_t k = 0; k < by_label.size(); ++k) {
      points[ld.tree.order[k] - 1] = by_label[k];
    }
    std::vector<PPoint> check(points.begin(), points.end());
    if (!isomorphic(build_tree(check, ld.prime), ld.tree)) {
      throw Error("synthesized points do not reproduce the local data");
    }
    return points;
  }

  // 1 + the largest pairwise intersection number: any perturbation of each
  // point by p^M times a p-integral number keeps the tree.
  inline long congruence_modulus(std::vector<Rational> const& points, Prime p) {
    long best = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      for (std::size_t j = i + 1; j < points.size(); ++j) {
        best = std::max(best, intersection_number(points[i], points[j], p));
      }
    }
    return best + 1;
  }

  namespace detail {
    // n/d mod m for d invertible mod m, in [0, m).
    inline BigInt residue_of(Rational const& q, BigInt const& m) {
      BigInt n = ((q.numerator() % m) + m) % m;
      return (n * mod_inverse(q.denominator(), m)) % m;
    }
  }  // namespace detail

  // Points inducing every prescribed tree at once. Per prime p with
  // s_p = max(0, -min v_p(b_i)) and D = prod p^s_p, the numerators
  // D a_i are fixed modulo p^(M_p + s_p) by CRT.
  inline std::vector<Rational> synthesize_multi(std::map<Prime, MarkedTree> const& specs) {
    if (specs.empty()) {
      throw Error("synthesis needs at least one prime");
    }
    std::size_t r = specs.begin()->second.rank();
    for (auto const& [p, tree] : specs) {
      if (tree.rank() != r) {
        throw Error("local data have different numbers of marks: "
                    + std::to_string(r) + " and " + std::to_string(tree.rank()) + " at p = "
                    + std::to_string(p.value()));
      }
    }
    struct Local {
      Prime                 p;
      std::vector<Rational> b;
      long                  m;
      long                  s;
    };
    std::vector<Local> local;
    BigInt             denom = 1;
    for (auto const& [p, tree] : specs) {
      auto b = synthesize_one(LocalData{tree, p});
      long s = 0;
      for (auto const& x : b) {
        if (!x.is_zero()) {
          s = std::max(s, -valuation(x, p));
        }
      }
      local.push_back(Local{p, b, congruence_modulus(b, p), s});
      denom *= power(p.big(), static_cast<unsigned long>(s));
    }
    std::vector<Rational> out;
    for (std::size_t i = 0; i < r; ++i) {
      std::vector<Congruence> pairs;
      for (auto const& l : local) {
        BigInt mod = power(l.p.big(), static_cast<unsigned long>(l.m + l.s));
        pairs.push_back(Congruence{detail::residue_of(Rational(denom) * l.b[i], mod), mod});
      }
      out.push_back(Rational(crt(pairs), denom));
    }
    std::vector<PPoint> check(out.begin(), out.end());
    for (auto const& [p, tree] : specs) {
      if (!isomorphic(build_tree(check, p), tree)) {
        throw Error("combined points do not reproduce the local data at p = "
                    + std::to_string(p.value()));
      }
    }
    return out;
  }

  inline std::vector<Rational> synthesize_multi(std::map<Prime, LocalData> const& specs) {
    std::map<Prime, MarkedTree> trees;
    for (auto const& [p, ld] : specs) {
      if (ld.prime != p) {
        throw Error("local data for p = " + std::to_string(ld.prime.value())
                    + " filed under p = " + std::to_string(p.value()));
      }
      trees.emplace(p, ld.tree);
    }
    return synthesize_multi(trees);
  }

  // A chain from a leaf with marks {1, 2} up to the root, intermediate
  // vertices holding up to p - 1 marks and the root the remaining 2..p.
  // For r = 3 it is the one-vertex tree. Every thickness equals `thickness`.
  inline MarkedTree default_unramified_shape(std::size_t r, Prime p, long thickness) {
    if (r < 3) {
      throw Error("stable marked reduction requires at least 3 marks");
    }
    auto       pp = static_cast<std::size_t>(p.value());
    MarkedTree t;
    t.order = identity_order(r);
    if (r == 3) {
      t.vertices = {0};
      t.root     = 0;
      t.marks.assign(r, 0);
      return t;
    }
    std::size_t rest      = r - 2;
    std::size_t root_take = std::min(pp, rest);
    rest -= root_take;
    std::vector<std::size_t> middle;
    while (rest > 0) {
      std::size_t take = std::min(pp - 1, rest);
      middle.push_back(take);
      rest -= take;
    }
    // Vertex 0 is the root, then the middles top-down, then the leaf.
    std::size_t n = middle.size() + 2;
    for (std::size_t v = 0; v < n; ++v) {
      t.vertices.push_back(static_cast<int>(v));
      if (v > 0) {
        t.edges.push_back(TreeEdge{static_cast<int>(v), static_cast<int>(v) - 1, thickness});
      }
    }
    t.root = 0;
    t.marks.assign(2, static_cast<int>(n - 1));
    for (std::size_t m = middle.size(); m-- > 0;) {
      t.marks.insert(t.marks.end(), middle[m], static_cast<int>(m + 1));
    }
    t.marks.insert(t.marks.end(), root_take, 0);
    return t;
  }

  namespace detail {
    inline void check_unramified_primes(PermGroup const& g, std::set<Prime> const& primes) {
      if (primes.empty()) {
        throw Error("no primes given");
      }
      for (Prime p : primes) {
        if (g.order() % static_cast<std::size_t>(p.value()) == 0) {
          throw Error("p = " + std::to_string(p.value()) + " divides |G| = "
                      + std::to_string(g.order()));
        }
      }
    }
  }  // namespace detail

  // Caller-supplied shapes: every thickness must be a multiple of
  // exp(Inn(G)) so that d acts trivially on every tuple.
  inline std::vector<Rational> synthesize_unramified(PermGroup const&                   g,
                                                     std::map<Prime, MarkedTree> const& shapes) {
    std::set<Prime> primes;
    for (auto const& [p, t] : shapes) {
      primes.insert(p);
    }
    detail::check_unramified_primes(g, primes);
    long n = inn_exponent(g);
    for (auto const& [p, t] : shapes) {
      for (auto const& e : t.edges) {
        if (e.thickness % n != 0) {
          throw Error("thickness " + std::to_string(e.thickness) + " at p = "
                      + std::to_string(p.value()) + " is not a multiple of exp(Inn(G)) = "
                      + std::to_string(n));
        }
      }
    }
    return synthesize_multi(shapes);
  }

  inline std::vector<Rational> synthesize_unramified(PermGroup const&       g,
                                                     std::size_t            r,
                                                     std::set<Prime> const& primes) {
    if (r < 3) {
      throw Error("stable marked reduction requires at least 3 marks");
    }
    detail::check_unramified_primes(g, primes);
    long                        n = inn_exponent(g);
    std::map<Prime, MarkedTree> shapes;
    for (Prime p : primes) {
      shapes.emplace(p, default_unramified_shape(r, p, n));
    }
    return synthesize_unramified(g, shapes);
  }

}  // namespace tamepi

#endif  // TAMEPI_SYNTHESIS_HPP_
