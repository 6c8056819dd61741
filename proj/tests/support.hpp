#ifndef TAMEPI_TESTS_SUPPORT_HPP_
#define TAMEPI_TESTS_SUPPORT_HPP_

// Fixtures shared by the unit tests and the acceptance runner: small groups,
// seeded random configurations, tuples and local data, and brute-force
// oracles written independently of the library code they check.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tamepi.hpp"

namespace tamepi::testing {

  using Rng = std::mt19937_64;

  inline long uniform(Rng& rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
  }

  struct NamedGroup {
    std::string name;
    std::string gens;
  };

  // Q8 is its regular representation: i = (1 2 4 7)(3 6 8 5),
  // j = (1 3 4 8)(2 5 7 6).
  inline std::vector<NamedGroup> const& small_groups() {
    static std::vector<NamedGroup> const groups{
        {"S3", "(1 2);(1 2 3)"},
        {"S4", "(1 2);(1 2 3 4)"},
        {"D4", "(1 2 3 4);(1 3)"},
        {"Q8", "(1 2 4 7)(3 6 8 5);(1 3 4 8)(2 5 7 6)"},
        {"A4", "(1 2 3);(2 3 4)"},
    };
    return groups;
  }

  inline PermGroup group(std::string const& name) {
    for (auto const& g : small_groups()) {
      if (g.name == name) {
        return parse_group(g.gens);
      }
    }
    throw Error("unknown test group " + name);
  }

  // Uniform over product-1 tuples of length r, conditioned on generating G.
  inline GroupTuple random_tuple(PermGroup const& g, std::size_t r, Rng& rng) {
    auto const& el = g.elements();
    for (int attempt = 0; attempt < 100000; ++attempt) {
      std::vector<Permutation> t;
      Permutation              prod = g.identity();
      for (std::size_t i = 0; i + 1 < r; ++i) {
        t.push_back(el[static_cast<std::size_t>(uniform(rng, 0, long(el.size()) - 1))]);
        prod = prod * t.back();
      }
      t.push_back(prod.inverse());
      if (PermGroup(t).order() == g.order()) {
        return GroupTuple(g, t);
      }
    }
    throw Error("no generating tuple found");
  }

  // Points built from a few random discs so that clusters of several depths
  // appear. Some points are non-integral or infinite when allowed.
  inline std::vector<PPoint> random_configuration(std::size_t r, Prime p, long max_val, Rng& rng,
                                                  bool allow_far = true) {
    BigInt              pb = p.big();
    std::vector<PPoint> pts;
    auto                contains = [&](PPoint const& x) {
      return std::find(pts.begin(), pts.end(), x) != pts.end();
    };
    while (pts.size() < r) {
      PPoint x(0);
      long   kind = uniform(rng, 0, 9);
      if (allow_far && kind == 0 && !contains(PPoint::infinity())) {
        x = PPoint::infinity();
      } else if (allow_far && kind == 1) {
        long v = uniform(rng, 1, std::max<long>(1, max_val));
        x      = PPoint(Rational(uniform(rng, 1, p.value() * 3), power(pb, static_cast<unsigned long>(v))));
      } else if (kind <= 5 && !pts.empty()) {
        // Near an existing finite point.
        std::vector<Rational> finite;
        for (auto const& q : pts) {
          if (!q.is_infinity()) {
            finite.push_back(q.value());
          }
        }
        if (finite.empty()) {
          continue;
        }
        Rational base = finite[static_cast<std::size_t>(uniform(rng, 0, long(finite.size()) - 1))];
        long     v    = uniform(rng, 1, max_val);
        long     u    = uniform(rng, 1, p.value() - 1) + p.value() * uniform(rng, -2, 2);
        x             = PPoint(base + Rational(BigInt(u) * power(pb, static_cast<unsigned long>(v))));
      } else {
        x = PPoint(Rational(uniform(rng, -3 * p.value(), 3 * p.value())));
      }
      if (!contains(x)) {
        pts.push_back(x);
      }
    }
    return pts;
  }

  // Random valid local data with marks given random labels. When want_full
  // is set the root is made to carry p + 1 items where r allows it.
  inline LocalData random_local_data(Prime p, std::size_t max_r, long max_thickness, Rng& rng,
                                     bool want_full = false) {
    auto cap = static_cast<std::size_t>(p.value()) + 1;
    for (;;) {
      std::size_t        n = static_cast<std::size_t>(uniform(rng, 1, 4));
      std::vector<long>  parent(n, -1);
      std::vector<std::size_t> deg(n, 0);
      for (std::size_t v = 1; v < n; ++v) {
        parent[v] = uniform(rng, 0, long(v) - 1);
        ++deg[v];
        ++deg[static_cast<std::size_t>(parent[v])];
      }
      std::vector<std::size_t> marks(n, 0);
      std::size_t              total = 0;
      bool                     ok    = true;
      for (std::size_t v = 0; v < n; ++v) {
        if (deg[v] > cap) {
          ok = false;
        }
        marks[v] = deg[v] >= 3 ? 0 : 3 - deg[v];
        total += marks[v];
      }
      if (!ok || total > max_r) {
        continue;
      }
      if (want_full && deg[0] + marks[0] < cap) {
        std::size_t need = cap - deg[0] - marks[0];
        if (total + need <= max_r) {
          marks[0] += need;
          total += need;
        }
      }
      std::size_t r = static_cast<std::size_t>(uniform(rng, long(std::max<std::size_t>(total, 3)),
                                                       long(max_r)));
      for (std::size_t extra = total; extra < r; ++extra) {
        std::vector<std::size_t> room;
        for (std::size_t v = 0; v < n; ++v) {
          if (deg[v] + marks[v] < cap) {
            room.push_back(v);
          }
        }
        if (room.empty()) {
          break;
        }
        ++marks[room[static_cast<std::size_t>(uniform(rng, 0, long(room.size()) - 1))]];
      }
      r = std::accumulate(marks.begin(), marks.end(), std::size_t(0));
      if (r < 3) {
        continue;
      }
      // Vertex ids are shuffled so that nothing relies on 0..n-1 layouts.
      std::vector<int> ids(n);
      std::iota(ids.begin(), ids.end(), 10);
      std::shuffle(ids.begin(), ids.end(), rng);
      MarkedTree t;
      t.vertices = ids;
      t.root     = ids[0];
      for (std::size_t v = 1; v < n; ++v) {
        t.edges.push_back(TreeEdge{ids[v], ids[static_cast<std::size_t>(parent[v])],
                                   uniform(rng, 1, max_thickness)});
      }
      std::vector<int> holder;
      for (std::size_t v = 0; v < n; ++v) {
        holder.insert(holder.end(), marks[v], ids[v]);
      }
      std::shuffle(holder.begin(), holder.end(), rng);
      t.marks = holder;
      t.order = identity_order(r);
      LocalData ld{t, p};
      if (validate_local_data(ld).empty()) {
        return ld;
      }
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Oracles
  ////////////////////////////////////////////////////////////////////////

  // v_p of a nonzero integer by repeated division on machine integers.
  inline long naive_valuation(long long n, long long p) {
    long v = 0;
    n      = n < 0 ? -n : n;
    while (n % p == 0) {
      n /= p;
      ++v;
    }
    return v;
  }

  inline long long naive_crt(std::vector<std::pair<long long, long long>> const& pairs) {
    long long prod = 1;
    for (auto const& [res, mod] : pairs) {
      prod *= mod;
    }
    for (long long x = 0; x < prod; ++x) {
      bool ok = true;
      for (auto const& [res, mod] : pairs) {
        ok = ok && ((x - res) % mod + mod) % mod == 0;
      }
      if (ok) {
        return x;
      }
    }
    return -1;
  }

  // Intersection number straight from the chart rule, for finite points.
  inline long chart_intersection(Rational const& a, Rational const& b, Prime p) {
    auto integral = [&](Rational const& x) {
      return x.is_zero() || valuation(x, p) >= 0;
    };
    bool ia = integral(a), ib = integral(b);
    if (ia != ib) {
      return 0;
    }
    Rational d = ia ? a - b : a.inverse() - b.inverse();
    return std::max(0L, valuation(d, p));
  }

  struct ClusterRecord {
    std::set<std::size_t> members;  // input indices, 1-based
    long                  thickness;

    friend auto operator<=>(ClusterRecord const&, ClusterRecord const&) = default;
  };

  // Clusters from the ball characterisation: S is a proper cluster iff every
  // inner intersection exceeds every outer one; the thickness is the gap.
  // Needs a configuration with at least 3 residue directions.
  inline std::set<ClusterRecord> brute_force_clusters(std::vector<std::vector<long>> const& e) {
    std::size_t             r = e.size();
    std::set<ClusterRecord> out;
    for (unsigned long mask = 1; mask + 1 < (1ul << r); ++mask) {
      if (__builtin_popcountl(mask) < 2) {
        continue;
      }
      long inner = -1, outer = 0;
      for (std::size_t i = 0; i < r; ++i) {
        if (!(mask >> i & 1)) {
          continue;
        }
        for (std::size_t j = 0; j < r; ++j) {
          if (i == j) {
            continue;
          }
          if (mask >> j & 1) {
            inner = inner < 0 ? e[i][j] : std::min(inner, e[i][j]);
          } else {
            outer = std::max(outer, e[i][j]);
          }
        }
      }
      if (inner > outer) {
        ClusterRecord c{{}, inner - outer};
        for (std::size_t i = 0; i < r; ++i) {
          if (mask >> i & 1) {
            c.members.insert(i + 1);
          }
        }
        out.insert(c);
      }
    }
    return out;
  }

  // The same data read off a tree, in input indices.
  inline std::set<ClusterRecord> tree_clusters(MarkedTree const& t) {
    TreeView                view(t);
    std::set<ClusterRecord> out;
    for (std::size_t v = 0; v < view.size(); ++v) {
      if (view.is_root(v)) {
        continue;
      }
      ClusterRecord c{{}, view.thickness(v)};
      for (std::size_t k : view.subtree_marks(v)) {
        c.members.insert(t.order[k - 1]);
      }
      out.insert(c);
    }
    return out;
  }

  inline std::vector<Permutation> brute_force_center(PermGroup const& g) {
    std::vector<Permutation> z;
    for (auto const& x : g.elements()) {
      bool central = true;
      for (auto const& y : g.elements()) {
        central = central && x * y == y * x;
      }
      if (central) {
        z.push_back(x);
      }
    }
    return z;
  }

  inline bool same_set(std::vector<Permutation> a, std::vector<Permutation> b) {
    auto less = [](Permutation const& x, Permutation const& y) {
      return x.images() < y.images();
    };
    std::sort(a.begin(), a.end(), less);
    std::sort(b.begin(), b.end(), less);
    return a == b;
  }

  // h Z(G) as a sorted list.
  inline std::vector<Permutation> coset(Permutation const& h, std::vector<Permutation> const& z) {
    std::vector<Permutation> out;
    for (auto const& c : z) {
      out.push_back(h * c);
    }
    return out;
  }

  // Images of a general automorphism evaluated on a plain list of entries.
  inline std::vector<Permutation> evaluate_images(TupleAutomorphism const&        a,
                                                  std::vector<Permutation> const& t) {
    std::vector<Permutation> out;
    for (auto const& w : a.images()) {
      Permutation x(t.front().degree());
      for (Letter l : w.letters()) {
        Permutation const& g = t[static_cast<std::size_t>(std::abs(l)) - 1];
        x                    = x * (l > 0 ? g : g.inverse());
      }
      out.push_back(x);
    }
    return out;
  }

  inline bool uniformly_conjugate(std::vector<Permutation> const& a,
                                  std::vector<Permutation> const& b, PermGroup const& g) {
    for (auto const& h : g.elements()) {
      bool ok = true;
      for (std::size_t i = 0; i < a.size() && ok; ++i) {
        ok = h * a[i] * h.inverse() == b[i];
      }
      if (ok) {
        return true;
      }
    }
    return false;
  }

  // Least N with d^N fixing the tuple up to uniform conjugacy, iterating on
  // entries through the general-automorphism path, searched up to `limit`.
  inline long brute_force_index(MarkedTree const& tree, GroupTuple const& t, long limit) {
    TupleAutomorphism        d   = delta_action(tree).as_automorphism();
    std::vector<Permutation> cur = t.entries();
    for (long n = 1; n <= limit; ++n) {
      cur = evaluate_images(d, cur);
      if (uniformly_conjugate(t.entries(), cur, t.group())) {
        return n;
      }
    }
    return -1;
  }

}  // namespace tamepi::testing

#endif  // TAMEPI_TESTS_SUPPORT_HPP_
