#ifndef TAMEPI_MODULI_HPP_
#define TAMEPI_MODULI_HPP_

// Ramification of the field of moduli at a prime and vertical inertia for
// G-covers given by branch cycle descriptions.
//
// Tuple entry k is the local monodromy at the mark labelled k in the tree,
// i.e. at input point tree.order[k-1].

#include <cstddef>
#include <future>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "action.hpp"
#include "error.hpp"
#include "perm_group.hpp"
#include "tree.hpp"

namespace tamepi {

  struct RamificationReport {
    Prime      prime;
    MarkedTree tree;
    long       index = 1;
    long       bound = 1;
    // p | |G|: outside the tame prime-to-p setting, reported but not trusted.
    bool p_divides_order = false;
    bool non_coalescing  = false;

    bool divides() const noexcept {
      return bound % index == 0;
    }
  };

  namespace detail {
    inline void check_rank(MarkedTree const& tree, GroupTuple const& t) {
      if (tree.rank() != t.rank()) {
        throw Error("rank mismatch: tree has " + std::to_string(tree.rank())
                    + " marks, tuple has " + std::to_string(t.rank()) + " entries");
      }
    }
  }  // namespace detail

  // Least N >= 1 such that d^N fixes the tuple up to uniform conjugation.
  inline long ramification_index(MarkedTree const& tree, GroupTuple const& t) {
    detail::check_rank(tree, t);
    long             bound = inn_exponent(t.group());
    ConjugatorAction delta = delta_action(tree);
    GroupTuple       cur   = t;
    for (long n = 1; n <= bound; ++n) {
      cur = apply_action(delta, cur);
      if (!uniform_conjugators(t, cur).empty()) {
        if (bound % n != 0) {
          throw Error("ramification index " + std::to_string(n)
                      + " does not divide exp(Inn(G)) = " + std::to_string(bound));
        }
        return n;
      }
    }
    throw Error("iterated action did not return within exp(Inn(G)) = "
                + std::to_string(bound) + " steps");
  }

  // {h : d(g_i) = h g_i h^-1 for all i}, a coset of Z(G).
  inline std::vector<Permutation> vertical_inertia(MarkedTree const& tree, GroupTuple const& t) {
    detail::check_rank(tree, t);
    auto h = uniform_conjugators(t, apply_action(delta_action(tree), t));
    if (h.empty()) {
      throw Error("tuple not defined over K: descent hypothesis fails");
    }
    return h;
  }

  inline RamificationReport ramification_report(MarkedTree tree, GroupTuple const& t, Prime p) {
    RamificationReport rep{p, std::move(tree)};
    rep.bound           = inn_exponent(t.group());
    rep.index           = ramification_index(rep.tree, t);
    rep.p_divides_order = t.group().order() % static_cast<std::size_t>(p.value()) == 0;
    rep.non_coalescing  = is_single_vertex(rep.tree);
    return rep;
  }

  // One report per prime; primes are processed concurrently.
  inline std::map<Prime, RamificationReport> global_report(std::vector<PPoint> const& points,
                                                           GroupTuple const&          t,
                                                           std::set<Prime> const&     primes) {
    t.group().elements();
    std::vector<std::pair<Prime, std::future<RamificationReport>>> jobs;
    for (Prime p : primes) {
      jobs.emplace_back(p, std::async(std::launch::async, [&points, &t, p] {
                          return ramification_report(build_tree(points, p), t, p);
                        }));
    }
    std::map<Prime, RamificationReport> out;
    for (auto& [p, job] : jobs) {
      out.emplace(p, job.get());
    }
    return out;
  }

}  // namespace tamepi

#endif  // TAMEPI_MODULI_HPP_
