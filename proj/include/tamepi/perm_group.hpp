#ifndef TAMEPI_PERM_GROUP_HPP_
#define TAMEPI_PERM_GROUP_HPP_

// Brute-force finite permutation groups: closure enumeration, center,
// exponent of G/Z(G), evaluation of words on branch cycle descriptions, and
// uniform conjugacy of tuples.
//
// Products act left to right: x^(gh) = (x^g)^h, the usual convention for
// branch cycle descriptions.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "word.hpp"

namespace tamepi {

  class Permutation {
   public:
    using point_type = std::uint32_t;

    explicit Permutation(std::size_t degree = 0) : images_(degree) {
      std::iota(images_.begin(), images_.end(), point_type(0));
    }

    // images[x] = x^g, 0-based.
    static Permutation from_images(std::vector<point_type> images) {
      std::vector<bool> seen(images.size(), false);
      for (point_type x : images) {
        if (x >= images.size() || seen[x]) {
          throw Error("image list is not a bijection");
        }
        seen[x] = true;
      }
      Permutation g;
      g.images_ = std::move(images);
      return g;
    }

    std::size_t degree() const noexcept {
      return images_.size();
    }
    point_type operator[](point_type x) const {
      return images_[x];
    }
    std::vector<point_type> const& images() const noexcept {
      return images_;
    }

    bool is_identity() const {
      for (point_type x = 0; x < images_.size(); ++x) {
        if (images_[x] != x) {
          return false;
        }
      }
      return true;
    }

    // Pads with fixed points.
    Permutation extended(std::size_t degree) const {
      if (degree < images_.size()) {
        throw Error("cannot shrink permutation of degree "
                    + std::to_string(images_.size()));
      }
      Permutation g(degree);
      std::copy(images_.begin(), images_.end(), g.images_.begin());
      return g;
    }

    friend Permutation operator*(Permutation const& g, Permutation const& h) {
      if (g.degree() != h.degree()) {
        throw Error("degree mismatch in permutation product");
      }
      Permutation gh(g.degree());
      for (point_type x = 0; x < g.degree(); ++x) {
        gh.images_[x] = h.images_[g.images_[x]];
      }
      return gh;
    }

    Permutation inverse() const {
      Permutation inv(degree());
      for (point_type x = 0; x < degree(); ++x) {
        inv.images_[images_[x]] = x;
      }
      return inv;
    }

    // h g h^-1
    Permutation conjugated_by(Permutation const& h) const {
      return h * *this * h.inverse();
    }

    std::size_t order() const {
      std::size_t n = 1;
      Permutation g = *this;
      while (!g.is_identity()) {
        g = g * *this;
        ++n;
      }
      return n;
    }

    friend bool operator==(Permutation const&, Permutation const&) = default;

    // Disjoint cycles with 1-based points, "()" for the identity.
    std::string to_string() const {
      std::string       s;
      std::vector<bool> done(degree(), false);
      for (point_type x = 0; x < degree(); ++x) {
        if (done[x] || images_[x] == x) {
          continue;
        }
        s += "(";
        point_type y = x;
        bool       first = true;
        while (!done[y]) {
          done[y] = true;
          s += (first ? "" : " ") + std::to_string(y + 1);
          first = false;
          y     = images_[y];
        }
        s += ")";
      }
      return s.empty() ? "()" : s;
    }

    // Cycle notation "(1 2 3)(4 5)"; commas inside a cycle are accepted as
    // separators too. The degree is the largest point mentioned unless a
    // larger one is requested.
    static Permutation parse(std::string_view s, std::size_t degree = 0) {
      std::vector<std::vector<point_type>> cycles;
      std::size_t                          i = 0;
      auto fail = [&](std::string const& msg) {
        throw Error(msg + " in permutation \"" + std::string(s) + "\"");
      };
      auto skip = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
          ++i;
        }
      };
      skip();
      if (i == s.size()) {
        fail("empty string");
      }
      while (i < s.size()) {
        if (s[i] != '(') {
          fail("expected '('");
        }
        ++i;
        std::vector<point_type> cyc;
        for (;;) {
          skip();
          if (i < s.size() && s[i] == ',') {
            ++i;
            continue;
          }
          if (i < s.size() && s[i] == ')') {
            ++i;
            break;
          }
          std::size_t start = i;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            ++i;
          }
          if (start == i) {
            fail("expected a point");
          }
          unsigned long x = std::stoul(std::string(s.substr(start, i - start)));
          if (x == 0) {
            fail("points are numbered from 1");
          }
          cyc.push_back(static_cast<point_type>(x - 1));
        }
        cycles.push_back(std::move(cyc));
        skip();
      }
      std::size_t n = degree;
      for (auto const& c : cycles) {
        for (point_type x : c) {
          n = std::max<std::size_t>(n, x + 1);
        }
      }
      Permutation       g(n);
      std::vector<bool> moved(n, false);
      for (auto const& c : cycles) {
        for (std::size_t k = 0; k < c.size(); ++k) {
          if (moved[c[k]]) {
            fail("point " + std::to_string(c[k] + 1) + " repeated");
          }
          moved[c[k]]      = true;
          g.images_[c[k]] = c[(k + 1) % c.size()];
        }
      }
      return g;
    }

   private:
    std::vector<point_type> images_;
  };

  struct PermutationHash {
    std::size_t operator()(Permutation const& g) const noexcept {
      std::size_t h = 1469598103934665603ull;
      for (auto x : g.images()) {
        h ^= x;
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  inline constexpr std::size_t default_enumeration_cap = 1'000'000;

  // A group given by generators; the element list is computed on first use,
  // once, and shared by copies.
  class PermGroup {
   public:
    explicit PermGroup(std::vector<Permutation> generators,
                       std::size_t              cap = default_enumeration_cap)
        : cap_(cap), cache_(std::make_shared<Cache>()) {
      std::size_t n = 1;
      for (auto const& g : generators) {
        n = std::max(n, g.degree());
      }
      for (auto& g : generators) {
        generators_.push_back(g.extended(n));
      }
      degree_ = n;
    }

    std::size_t degree() const noexcept {
      return degree_;
    }
    std::size_t cap() const noexcept {
      return cap_;
    }
    std::vector<Permutation> const& generators() const noexcept {
      return generators_;
    }
    Permutation identity() const {
      return Permutation(degree_);
    }

    std::vector<Permutation> const& elements() const {
      std::call_once(cache_->once, [this] { enumerate_into(*cache_); });
      return cache_->elements;
    }

    std::size_t order() const {
      return elements().size();
    }

    bool contains(Permutation const& g) const {
      elements();
      return g.degree() == degree_ && cache_->index.contains(g);
    }

    // Position of g in elements().
    std::size_t index_of(Permutation const& g) const {
      elements();
      auto it = cache_->index.find(g);
      if (g.degree() != degree_ || it == cache_->index.end()) {
        throw Error(g.to_string() + " is not an element of the group");
      }
      return it->second;
    }

    // Brings a parsed permutation to this group's degree.
    Permutation adopt(Permutation const& g) const {
      if (g.degree() > degree_) {
        for (auto x = static_cast<Permutation::point_type>(degree_); x < g.degree(); ++x) {
          if (g[x] != x) {
            throw Error(g.to_string() + " moves points outside the group's degree "
                        + std::to_string(degree_));
          }
        }
        std::vector<Permutation::point_type> im(g.images().begin(),
                                                g.images().begin()
                                                    + static_cast<long>(degree_));
        return Permutation::from_images(std::move(im));
      }
      return g.extended(degree_);
    }

   private:
    struct Cache {
      std::once_flag                                                once;
      std::vector<Permutation>                                      elements;
      std::unordered_map<Permutation, std::size_t, PermutationHash> index;
    };

    void enumerate_into(Cache& c) const {
      std::vector<Permutation>                                      elems{identity()};
      std::unordered_map<Permutation, std::size_t, PermutationHash> index{{identity(), 0}};
      for (std::size_t head = 0; head < elems.size(); ++head) {
        for (auto const& s : generators_) {
          Permutation y = elems[head] * s;
          if (index.contains(y)) {
            continue;
          }
          if (elems.size() >= cap_) {
            throw Error("group enumeration exceeded cap of " + std::to_string(cap_)
                        + " elements (partial count " + std::to_string(elems.size())
                        + ")");
          }
          index.emplace(y, elems.size());
          elems.push_back(std::move(y));
        }
      }
      c.elements = std::move(elems);
      c.index    = std::move(index);
    }

    std::size_t              degree_ = 1;
    std::size_t              cap_;
    std::vector<Permutation> generators_;
    std::shared_ptr<Cache>   cache_;
  };

  inline std::vector<Permutation> const& enumerate(PermGroup const& g) {
    return g.elements();
  }

  inline std::vector<Permutation> center(PermGroup const& g) {
    std::vector<Permutation> z;
    for (auto const& x : g.elements()) {
      bool central = true;
      for (auto const& s : g.generators()) {
        if (x * s != s * x) {
          central = false;
          break;
        }
      }
      if (central) {
        z.push_back(x);
      }
    }
    return z;
  }

  // exp(Inn(G)) = exp(G/Z(G)): least N with x^N central for every x.
  inline long inn_exponent(PermGroup const& g) {
    auto                                                 z = center(g);
    std::unordered_set<Permutation, PermutationHash> zset(z.begin(), z.end());
    long                                                 n = 1;
    for (auto const& x : g.elements()) {
      long        k = 1;
      Permutation y = x;
      while (!zset.contains(y)) {
        y = y * x;
        ++k;
      }
      n = std::lcm(n, k);
    }
    return n;
  }

  inline bool is_abelian(PermGroup const& g) {
    for (auto const& a : g.generators()) {
      for (auto const& b : g.generators()) {
        if (a * b != b * a) {
          return false;
        }
      }
    }
    return true;
  }

  // A branch cycle description: entries with product 1 generating the group.
  class GroupTuple {
   public:
    GroupTuple(PermGroup group, std::vector<Permutation> entries)
        : group_(std::move(group)) {
      if (entries.empty()) {
        throw Error("tuple needs at least one entry");
      }
      for (auto const& g : entries) {
        entries_.push_back(group_.adopt(g));
      }
      Permutation prod = group_.identity();
      for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (!group_.contains(entries_[i])) {
          throw Error("tuple entry " + std::to_string(i + 1) + " "
                      + entries_[i].to_string() + " is not in the group");
        }
        prod = prod * entries_[i];
      }
      if (!prod.is_identity()) {
        throw Error("tuple product is " + prod.to_string() + ", not the identity");
      }
      PermGroup sub(entries_, group_.cap());
      if (sub.order() != group_.order()) {
        throw Error("tuple generates a subgroup of order " + std::to_string(sub.order())
                    + ", not the whole group of order "
                    + std::to_string(group_.order()));
      }
    }

    PermGroup const& group() const noexcept {
      return group_;
    }
    std::vector<Permutation> const& entries() const noexcept {
      return entries_;
    }
    std::size_t rank() const noexcept {
      return entries_.size();
    }
    Permutation const& operator[](std::size_t i) const {
      return entries_.at(i);
    }

    friend bool operator==(GroupTuple const& a, GroupTuple const& b) {
      return a.entries_ == b.entries_;
    }

   private:
    PermGroup                group_;
    std::vector<Permutation> entries_;
  };

  // Image of w under a_i -> g_i.
  inline Permutation evaluate(Word const& w, GroupTuple const& t) {
    if (w.rank() != t.rank()) {
      throw Error("rank mismatch: word of rank " + std::to_string(w.rank())
                  + " on tuple of length " + std::to_string(t.rank()));
    }
    Permutation out = t.group().identity();
    for (Letter l : w.letters()) {
      Permutation const& g = t[static_cast<std::size_t>(std::abs(l)) - 1];
      out                  = out * (l > 0 ? g : g.inverse());
    }
    return out;
  }

  // Entry i becomes the value of the image of a_i. The result is checked
  // again, so a non-automorphism shows up as an error.
  inline GroupTuple apply_action(TupleAutomorphism const& a, GroupTuple const& t) {
    if (a.rank() != t.rank()) {
      throw Error("rank mismatch: action of rank " + std::to_string(a.rank())
                  + " on tuple of length " + std::to_string(t.rank()));
    }
    std::vector<Permutation> out;
    for (auto const& w : a.images()) {
      out.push_back(evaluate(w, t));
    }
    try {
      return GroupTuple(t.group(), std::move(out));
    } catch (Error const& e) {
      throw Error(std::string("action image is not a branch cycle description: ")
                  + e.what());
    }
  }

  // Conjugator actions evaluate q_i once and conjugate directly.
  inline GroupTuple apply_action(ConjugatorAction const& a, GroupTuple const& t) {
    if (a.rank() != t.rank()) {
      throw Error("rank mismatch: action of rank " + std::to_string(a.rank())
                  + " on tuple of length " + std::to_string(t.rank()));
    }
    std::vector<Permutation> out;
    for (std::size_t i = 0; i < t.rank(); ++i) {
      out.push_back(t[i].conjugated_by(evaluate(a.conjugators()[i], t)));
    }
    try {
      return GroupTuple(t.group(), std::move(out));
    } catch (Error const& e) {
      throw Error(std::string("action image is not a branch cycle description: ")
                  + e.what());
    }
  }

  // {h : t2_i = h t1_i h^-1 for all i}; empty or a coset h Z(G).
  inline std::vector<Permutation> uniform_conjugators(GroupTuple const& t1,
                                                      GroupTuple const& t2) {
    if (t1.rank() != t2.rank()) {
      throw Error("tuples of different lengths");
    }
    if (t1.group().degree() != t2.group().degree()
        || t1.group().order() != t2.group().order()) {
      throw Error("tuples live in different groups");
    }
    std::vector<Permutation> out;
    for (auto const& h : t1.group().elements()) {
      Permutation hinv = h.inverse();
      bool        ok   = true;
      for (std::size_t i = 0; i < t1.rank() && ok; ++i) {
        ok = h * t1[i] * hinv == t2[i];
      }
      if (ok) {
        out.push_back(h);
      }
    }
    return out;
  }

  // Groups and tuples in the notation used on the command line: generators
  // separated by ';', tuple entries by ',' outside parentheses.
  inline std::vector<std::string> split_top_level(std::string_view s, char sep) {
    std::vector<std::string> parts;
    std::string              cur;
    int                      depth = 0;
    for (char c : s) {
      if (c == '(') {
        ++depth;
      } else if (c == ')') {
        --depth;
      }
      if (c == sep && depth == 0) {
        parts.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    parts.push_back(cur);
    return parts;
  }

  inline PermGroup parse_group(std::string_view s, std::size_t cap = default_enumeration_cap) {
    std::vector<Permutation> gens;
    for (auto const& part : split_top_level(s, ';')) {
      gens.push_back(Permutation::parse(part));
    }
    return PermGroup(std::move(gens), cap);
  }

  inline GroupTuple parse_tuple(PermGroup const& g, std::string_view s) {
    std::vector<Permutation> entries;
    for (auto const& part : split_top_level(s, ',')) {
      entries.push_back(Permutation::parse(part));
    }
    return GroupTuple(g, std::move(entries));
  }

}  // namespace tamepi

#endif  // TAMEPI_PERM_GROUP_HPP_
