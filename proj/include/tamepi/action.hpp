#ifndef TAMEPI_ACTION_HPP_
#define TAMEPI_ACTION_HPP_

// Action of the tame Galois generator d on the bouquet generators a1..ar,
// read off a marked reduction tree, plus the Dehn-twist route to the same
// automorphism and the resulting presentation of pi_1'.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "error.hpp"
#include "tree.hpp"
#include "word.hpp"

namespace tamepi {

  // q_J: product of a_j over j in J, in increasing order of j.
  inline Word ordered_product(std::size_t rank, std::vector<std::size_t> const& indices) {
    Word q(rank);
    for (std::size_t j : indices) {
      q *= Word::generator(rank, j);
    }
    return q;
  }

  // For mark i with chain (I_1, t_1), ..., (I_k, t_k) innermost first,
  // d sends a_i to q a_i q^-1 with q = q_{I_k}^{t_k} ... q_{I_1}^{t_1}.
  inline ConjugatorAction delta_action(MarkedTree const& tree) {
    std::size_t       r = tree.rank();
    std::vector<Word> conjugators;
    conjugators.reserve(r);
    for (std::size_t i = 1; i <= r; ++i) {
      auto links = chain(tree, i);
      Word q(r);
      for (auto it = links.rbegin(); it != links.rend(); ++it) {
        q *= ordered_product(r, it->marks).pow(it->thickness);
      }
      conjugators.push_back(std::move(q));
    }
    return ConjugatorAction(r, std::move(conjugators));
  }

  // From points directly. With one or two marks there is no tree and d acts
  // trivially.
  inline ConjugatorAction delta_action(std::vector<PPoint> const& points, Prime p) {
    if (points.size() >= 3) {
      return delta_action(build_tree(points, p));
    }
    if (points.empty()) {
      throw Error("no marked points");
    }
    detail::check_distinct(points);
    return ConjugatorAction::identity(points.size());
  }

  // The action with every thickness multiplied by n, i.e. the action of the
  // generator over the extension of degree n.
  inline ConjugatorAction scaled_action(MarkedTree const& tree, long n) {
    return delta_action(scale_thickness(tree, n));
  }

  // Twist around a curve enclosing the marks in I: a_i -> q_I a_i q_I^-1 for
  // i in I, other generators fixed.
  inline ConjugatorAction dehn_twist(std::vector<std::size_t> const& indices, std::size_t rank) {
    if (indices.empty()) {
      throw Error("Dehn twist needs a nonempty index set");
    }
    std::vector<std::size_t> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (std::size_t i : sorted) {
      if (i < 1 || i > rank) {
        throw Error("Dehn twist index " + std::to_string(i) + " out of range 1.."
                    + std::to_string(rank));
      }
    }
    Word              q = ordered_product(rank, sorted);
    std::vector<Word> conjugators(rank, Word(rank));
    for (std::size_t i : sorted) {
      conjugators[i - 1] = q;
    }
    return ConjugatorAction(rank, std::move(conjugators));
  }

  // Product of D_v^{t_v} over the non-root vertices. Twists nearer the root
  // act first; incomparable vertices go by their smallest mark.
  inline TupleAutomorphism compose_twists(MarkedTree const& tree) {
    TreeView          view(tree);
    std::size_t       r      = tree.rank();
    TupleAutomorphism result = TupleAutomorphism::identity(r);
    for (std::size_t v : view.preorder()) {
      if (view.is_root(v)) {
        continue;
      }
      auto twist = power(dehn_twist(view.subtree_marks(v), r),
                         static_cast<unsigned long>(view.thickness(v)));
      result     = compose(twist, result);
    }
    return result;
  }

  // <a1..ar, d | a1...ar = 1, ^d a_i = b_i>, completed and reduced to its
  // maximal prime-to-p quotient. b_i = q_i a_i q_i^-1 with q_i from the
  // stored action, so each b_i is a conjugate of a_i by construction.
  class Presentation {
   public:
    Presentation(Prime p, ConjugatorAction action, std::vector<std::size_t> order)
        : prime_(p), action_(std::move(action)), order_(std::move(order)) {}

    Prime prime() const noexcept {
      return prime_;
    }
    std::size_t rank() const noexcept {
      return action_.rank();
    }
    ConjugatorAction const& action() const noexcept {
      return action_;
    }
    std::vector<std::size_t> const& order() const noexcept {
      return order_;
    }

    std::vector<Word> betas() const {
      std::vector<Word> b;
      for (std::size_t i = 1; i <= rank(); ++i) {
        b.push_back(action_.image(i));
      }
      return b;
    }

    std::vector<std::string> generators() const {
      std::vector<std::string> g;
      for (std::size_t i = 1; i <= rank(); ++i) {
        g.push_back("a" + std::to_string(i));
      }
      g.push_back("d");
      return g;
    }

    // A trivial action is written as commutators "d a_i = a_i d"; otherwise
    // every relation reads "^{d} a_i = ^{q_i} a_i" (or "= a_i" when q_i = 1).
    std::vector<std::string> relations() const {
      std::vector<std::string> rel;
      std::string              product;
      for (std::size_t i = 1; i <= rank(); ++i) {
        product += (i > 1 ? " a" : "a") + std::to_string(i);
      }
      rel.push_back(product + " = 1");
      bool trivial = action_.is_identity();
      for (std::size_t i = 1; i <= rank(); ++i) {
        std::string ai = "a" + std::to_string(i);
        Word const& q  = action_.conjugator(i);
        if (trivial) {
          rel.push_back("d " + ai + " = " + ai + " d");
        } else if (q.empty()) {
          rel.push_back("^{d} " + ai + " = " + ai);
        } else {
          rel.push_back("^{d} " + ai + " = ^{" + q.to_compact_string() + "} " + ai);
        }
      }
      return rel;
    }

    std::string annotation() const {
      return "maximal prime-to-" + std::to_string(prime_.value())
             + " quotient of the profinite completion";
    }

    std::string to_text() const {
      std::string s = "< ";
      auto        g = generators();
      for (std::size_t i = 0; i < g.size(); ++i) {
        s += (i ? ", " : "") + g[i];
      }
      s += " |\n";
      auto rel = relations();
      for (std::size_t i = 0; i < rel.size(); ++i) {
        s += "    " + rel[i] + (i + 1 < rel.size() ? ",\n" : "\n");
      }
      s += ">^(p')   p = " + std::to_string(prime_.value()) + "\n";
      s += annotation() + "\n";
      return s;
    }

   private:
    Prime                    prime_;
    ConjugatorAction         action_;
    std::vector<std::size_t> order_;
  };

  inline Presentation presentation(MarkedTree const& tree, Prime p) {
    return Presentation(p, delta_action(tree), tree.order);
  }

}  // namespace tamepi

#endif  // TAMEPI_ACTION_HPP_
