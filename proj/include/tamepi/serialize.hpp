#ifndef TAMEPI_SERIALIZE_HPP_
#define TAMEPI_SERIALIZE_HPP_

// JSON forms of trees, actions, presentations, reports and synthesized
// points. Objects keep their keys in schema order.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "action.hpp"
#include "error.hpp"
#include "moduli.hpp"
#include "perm_group.hpp"
#include "rational.hpp"
#include "tree.hpp"
#include "word.hpp"

namespace tamepi {

  using Json = nlohmann::ordered_json;

  namespace detail {
    template <typename T>
    T get(Json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key)) {
        throw Error(std::string("missing JSON field \"") + key + "\"");
      }
      try {
        return j.at(key).get<T>();
      } catch (nlohmann::json::exception const& e) {
        throw Error(std::string("bad JSON field \"") + key + "\": " + e.what());
      }
    }

    inline Rational rational_from(Json const& j) {
      if (j.is_number_integer()) {
        return Rational(j.get<long long>());
      }
      if (!j.is_string()) {
        throw Error("rational must be a string \"n/d\" or an integer");
      }
      return Rational::parse(j.get<std::string>());
    }
  }  // namespace detail

  inline Json to_json(Mobius const& m) {
    return Json{{"a", m.a.to_string()},
                {"b", m.b.to_string()},
                {"c", m.c.to_string()},
                {"d", m.d.to_string()}};
  }

  inline Mobius mobius_from_json(Json const& j) {
    if (!j.is_object()) {
      throw Error("normalization must be an object");
    }
    Mobius m;
    m.a = detail::rational_from(j.at("a"));
    m.b = detail::rational_from(j.at("b"));
    m.c = detail::rational_from(j.at("c"));
    m.d = detail::rational_from(j.at("d"));
    return m;
  }

  inline Json to_json(MarkedTree const& t) {
    Json edges = Json::array();
    for (auto const& e : t.edges) {
      edges.push_back(Json{{"child", e.child}, {"parent", e.parent}, {"thickness", e.thickness}});
    }
    Json marks = Json::object();
    for (std::size_t k = 0; k < t.marks.size(); ++k) {
      marks[std::to_string(k + 1)] = t.marks[k];
    }
    return Json{{"root", t.root},
                {"vertices", t.vertices},
                {"edges", edges},
                {"marks", marks},
                {"order", t.order},
                {"normalization", to_json(t.normalization)}};
  }

  // "order" defaults to the identity and "normalization" to the identity map.
  inline MarkedTree tree_from_json(Json const& j) {
    MarkedTree t;
    t.root     = detail::get<int>(j, "root");
    t.vertices = detail::get<std::vector<int>>(j, "vertices");
    for (auto const& e : detail::get<Json>(j, "edges")) {
      t.edges.push_back(TreeEdge{detail::get<int>(e, "child"), detail::get<int>(e, "parent"),
                                 detail::get<long>(e, "thickness")});
    }
    auto marks = detail::get<Json>(j, "marks");
    if (!marks.is_object()) {
      throw Error("\"marks\" must map labels to vertex ids");
    }
    t.marks.assign(marks.size(), 0);
    std::vector<bool> seen(marks.size(), false);
    for (auto const& [key, value] : marks.items()) {
      std::size_t k = 0;
      try {
        k = std::stoul(key);
      } catch (std::exception const&) {
        throw Error("mark label \"" + key + "\" is not a number");
      }
      if (k < 1 || k > marks.size() || seen[k - 1]) {
        throw Error("mark labels must be exactly 1.." + std::to_string(marks.size()));
      }
      seen[k - 1]    = true;
      t.marks[k - 1] = value.get<int>();
    }
    t.order = j.contains("order") ? j.at("order").get<std::vector<std::size_t>>()
                                  : identity_order(t.marks.size());
    if (j.contains("normalization")) {
      t.normalization = mobius_from_json(j.at("normalization"));
    }
    auto bad = structure_violations(t);
    if (!bad.empty()) {
      throw Error("malformed tree: " + bad.front());
    }
    return t;
  }

  inline Json words_to_json(std::vector<Word> const& ws) {
    Json a = Json::array();
    for (auto const& w : ws) {
      a.push_back(w.to_compact_string());
    }
    return a;
  }

  inline std::vector<Word> words_from_json(Json const& j, std::size_t rank) {
    std::vector<Word> out;
    for (auto const& s : j) {
      out.push_back(Word::parse(rank, s.get<std::string>()));
    }
    return out;
  }

  struct ActionRecord {
    long                     prime = 0;
    std::vector<std::size_t> order;
    long                     scale = 1;
    ConjugatorAction         action{1, {Word(1)}};
  };

  inline Json to_json(ActionRecord const& r) {
    std::vector<Word> images;
    for (std::size_t i = 1; i <= r.action.rank(); ++i) {
      images.push_back(r.action.image(i));
    }
    return Json{{"prime", r.prime},
                {"rank", r.action.rank()},
                {"order", r.order},
                {"scale", r.scale},
                {"conjugators", words_to_json(r.action.conjugators())},
                {"images", words_to_json(images)}};
  }

  inline ActionRecord action_from_json(Json const& j) {
    ActionRecord r;
    r.prime   = detail::get<long>(j, "prime");
    auto rank = detail::get<std::size_t>(j, "rank");
    r.order   = detail::get<std::vector<std::size_t>>(j, "order");
    r.scale   = detail::get<long>(j, "scale");
    r.action  = ConjugatorAction(rank, words_from_json(detail::get<Json>(j, "conjugators"), rank));
    return r;
  }

  inline Json to_json(Presentation const& pr) {
    return Json{{"generators", pr.generators()},
                {"relations", pr.relations()},
                {"annotation", pr.annotation()},
                {"prime", pr.prime().value()},
                {"rank", pr.rank()},
                {"order", pr.order()},
                {"conjugators", words_to_json(pr.action().conjugators())}};
  }

  inline Presentation presentation_from_json(Json const& j) {
    auto rank = detail::get<std::size_t>(j, "rank");
    return Presentation(Prime(detail::get<long long>(j, "prime")),
                        ConjugatorAction(rank,
                                         words_from_json(detail::get<Json>(j, "conjugators"), rank)),
                        detail::get<std::vector<std::size_t>>(j, "order"));
  }

  inline Json to_json(RamificationReport const& r) {
    return Json{{"prime", r.prime.value()},
                {"index", r.index},
                {"bound", r.bound},
                {"divides", r.divides()},
                {"flags",
                 Json{{"p_divides_order", r.p_divides_order},
                      {"non_coalescing", r.non_coalescing}}},
                {"tree", to_json(r.tree)}};
  }

  inline RamificationReport report_from_json(Json const& j) {
    RamificationReport r{Prime(detail::get<long long>(j, "prime")),
                         tree_from_json(detail::get<Json>(j, "tree"))};
    r.index = detail::get<long>(j, "index");
    r.bound = detail::get<long>(j, "bound");
    auto f  = detail::get<Json>(j, "flags");
    r.p_divides_order = detail::get<bool>(f, "p_divides_order");
    r.non_coalescing  = detail::get<bool>(f, "non_coalescing");
    return r;
  }

  inline Json to_json(std::map<Prime, RamificationReport> const& reports) {
    Json out = Json::object();
    for (auto const& [p, r] : reports) {
      out[std::to_string(p.value())] = to_json(r);
    }
    return out;
  }

  inline std::map<Prime, RamificationReport> reports_from_json(Json const& j) {
    std::map<Prime, RamificationReport> out;
    for (auto const& [key, value] : j.items()) {
      auto r = report_from_json(value);
      if (std::to_string(r.prime.value()) != key) {
        throw Error("report for p = " + std::to_string(r.prime.value()) + " filed under "
                    + key);
      }
      out.emplace(r.prime, r);
    }
    return out;
  }

  inline Json permutations_to_json(std::vector<Permutation> const& gs) {
    Json a = Json::array();
    for (auto const& g : gs) {
      a.push_back(g.to_string());
    }
    return a;
  }

  inline Json points_to_json(std::vector<Rational> const& pts, bool verified) {
    Json a = Json::array();
    for (auto const& x : pts) {
      a.push_back(x.to_string());
    }
    return Json{{"points", a}, {"verified", verified}};
  }

  inline std::vector<Rational> points_from_json(Json const& j) {
    std::vector<Rational> out;
    for (auto const& x : detail::get<Json>(j, "points")) {
      out.push_back(detail::rational_from(x));
    }
    return out;
  }

  // {"primes": {"5": <tree>, ...}}
  inline std::map<Prime, MarkedTree> spec_from_json(Json const& j) {
    auto primes = detail::get<Json>(j, "primes");
    if (!primes.is_object() || primes.empty()) {
      throw Error("\"primes\" must be a nonempty object keyed by prime");
    }
    std::map<Prime, MarkedTree> out;
    for (auto const& [key, value] : primes.items()) {
      long long p = 0;
      try {
        p = std::stoll(key);
      } catch (std::exception const&) {
        throw Error("prime key \"" + key + "\" is not a number");
      }
      out.emplace(Prime(p), tree_from_json(value));
    }
    return out;
  }

  inline Json spec_to_json(std::map<Prime, MarkedTree> const& spec) {
    Json primes = Json::object();
    for (auto const& [p, t] : spec) {
      primes[std::to_string(p.value())] = to_json(t);
    }
    return Json{{"primes", primes}};
  }

}  // namespace tamepi

#endif  // TAMEPI_SERIALIZE_HPP_
