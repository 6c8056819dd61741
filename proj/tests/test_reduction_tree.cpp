#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace tamepi;
using namespace tamepi::testing;

namespace {
  std::vector<PPoint> pts(std::initializer_list<Rational> xs) {
    return std::vector<PPoint>(xs.begin(), xs.end());
  }

  Rational pw(long long p, long e) {
    return Rational(power(BigInt(p), static_cast<unsigned long>(e)));
  }

  // The chart rule with infinity sent to 0 in the 1/z chart.
  long oracle_e(PPoint const& a, PPoint const& b, Prime p) {
    if (a.is_infinity() || b.is_infinity()) {
      PPoint const& f = a.is_infinity() ? b : a;
      if (f.value().is_zero() || valuation(f.value(), p) >= 0) {
        return 0;
      }
      return -valuation(f.value(), p);
    }
    return chart_intersection(a.value(), b.value(), p);
  }

  std::vector<std::vector<long>> oracle_matrix(std::vector<PPoint> const& x, Prime p) {
    std::vector<std::vector<long>> e(x.size(), std::vector<long>(x.size(), 0));
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (i != j) {
          e[i][j] = oracle_e(x[i], x[j], p);
        }
      }
    }
    return e;
  }

  std::vector<std::size_t> marks_at(MarkedTree const& t, int id) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < t.marks.size(); ++k) {
      if (t.marks[k] == id) {
        out.push_back(k + 1);
      }
    }
    return out;
  }
}  // namespace

TEST_CASE("intersection number examples", "[reduction_tree]") {
  for (long long p : {3, 5, 7}) {
    Prime pp(p);
    for (long m = 1; m <= 4; ++m) {
      CHECK(intersection_number(Rational(0), pw(p, m), pp) == m);
    }
    CHECK(intersection_number(Rational(1, p), Rational(2, p), pp) == 1);
  }
  CHECK(intersection_number(Rational(0), Rational(1), Prime(5)) == 0);
  CHECK(intersection_number(PPoint::infinity(), Rational(1, 25), Prime(5)) == 2);
  CHECK(intersection_number(PPoint::infinity(), Rational(3), Prime(5)) == 0);
  CHECK(intersection_number(Rational(1, 5), Rational(3), Prime(5)) == 0);
  CHECK_THROWS_AS(intersection_number(Rational(2), Rational(2), Prime(5)), Error);
}

TEST_CASE("intersection numbers match the chart rule", "[reduction_tree]") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    Prime p(std::vector<long long>{3, 5, 7}[static_cast<std::size_t>(uniform(rng, 0, 2))]);
    auto  x = random_configuration(6, p, 4, rng);
    auto  e = oracle_matrix(x, p);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t j = 0; j < x.size(); ++j) {
        if (i != j) {
          CHECK(intersection_number(x[i], x[j], p) == e[i][j]);
        }
      }
    }
  }
}

TEST_CASE("intersection number symmetries", "[reduction_tree]") {
  Rng rng(32);
  for (int trial = 0; trial < 300; ++trial) {
    Prime    p(std::vector<long long>{3, 5, 7}[static_cast<std::size_t>(uniform(rng, 0, 2))]);
    auto     x = random_configuration(2, p, 4, rng, false);
    Rational c(uniform(rng, -50, 50));
    long     u = uniform(rng, 1, p.value() - 1) + p.value() * uniform(rng, 0, 3);
    Rational a = x[0].value(), b = x[1].value();
    long     e = intersection_number(a, b, p);
    CHECK(e == intersection_number(b, a, p));
    CHECK(e == intersection_number(a + c, b + c, p));
    CHECK(e == intersection_number(a * Rational(u), b * Rational(u), p));
  }
}

TEST_CASE("normalize examples", "[reduction_tree]") {
  auto n = normalize(pts({0, 1, 2, 3}), Prime(7));
  CHECK(n.map.is_identity());
  CHECK(n.points == pts({0, 1, 2, 3}));
  for (long long p : {5, 7, 11}) {
    auto m = normalize(pts({0, Rational(p), Rational(2 * p), Rational(3 * p)}), Prime(p));
    CHECK(m.points == pts({0, 1, 2, 3}));
    CHECK(m.map.apply(Rational(p)) == PPoint(Rational(1)));
  }
  for (long long p : {3, 5, 7}) {
    auto m = normalize(pts({0, Rational(p), Rational(p * p), 1}), Prime(p));
    CHECK(m.points == pts({0, 1, Rational(p), Rational(1, p)}));
  }
  CHECK_THROWS_WITH(normalize(pts({0, 1}), Prime(5)),
                    "stable marked reduction requires at least 3 marks");
  CHECK_THROWS_AS(normalize(pts({0, 1, 1}), Prime(5)), Error);
}

TEST_CASE("normalization always reaches three directions", "[reduction_tree]") {
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    Prime p(std::vector<long long>{2, 3, 5, 7}[static_cast<std::size_t>(uniform(rng, 0, 3))]);
    auto  x = random_configuration(static_cast<std::size_t>(uniform(rng, 3, 7)), p, 4, rng);
    auto  n = normalize(x, p);
    CHECK(n.map.invertible());
    CHECK(residue_directions(n.points, p) >= 3);
    for (std::size_t i = 0; i < x.size(); ++i) {
      CHECK(n.map.apply(x[i]) == n.points[i]);
    }
  }
}

TEST_CASE("build_tree examples", "[reduction_tree]") {
  for (long long p : {3, 5, 7}) {
    for (long m = 1; m <= 3; ++m) {
      auto t = build_tree(pts({0, pw(p, m), 1, 2}), Prime(p));
      REQUIRE(t.vertices.size() == 2);
      REQUIRE(t.edges.size() == 1);
      CHECK(t.edges[0].thickness == m);
      CHECK(marks_at(t, t.edges[0].child) == std::vector<std::size_t>{1, 2});
      CHECK(marks_at(t, t.root) == std::vector<std::size_t>{3, 4});
      CHECK(t.order == identity_order(4));
    }
  }
  auto flat = build_tree(pts({0, 1, 2, 3}), Prime(7));
  CHECK(flat.vertices.size() == 1);
  CHECK(flat.edges.empty());

  for (long long p : {3, 5}) {
    auto t = build_tree(pts({0, pw(p, 3), Rational(p), 1, 2}), Prime(p));
    REQUIRE(t.edges.size() == 2);
    TreeView view(t);
    auto     a = view.children(view.root());
    REQUIRE(a.size() == 1);
    CHECK(view.thickness(a[0]) == 1);
    CHECK(view.marks_at(a[0]) == std::vector<std::size_t>{3});
    auto b = view.children(a[0]);
    REQUIRE(b.size() == 1);
    CHECK(view.thickness(b[0]) == 2);
    CHECK(view.marks_at(b[0]) == std::vector<std::size_t>{1, 2});
    CHECK(view.marks_at(view.root()) == std::vector<std::size_t>{4, 5});
  }
}

TEST_CASE("chain examples", "[reduction_tree]") {
  auto t73 = build_tree(pts({0, pw(5, 2), 1, 2}), Prime(5));
  CHECK(chain(t73, 1) == std::vector<ChainLink>{{{1, 2}, 2}});
  CHECK(chain(t73, 3).empty());
  auto flat = build_tree(pts({0, 1, 2, 3}), Prime(7));
  for (std::size_t i = 1; i <= 4; ++i) {
    CHECK(chain(flat, i).empty());
  }
  auto t5 = build_tree(pts({0, pw(3, 3), 3, 1, 2}), Prime(3));
  CHECK(chain(t5, 1) == std::vector<ChainLink>{{{1, 2}, 2}, {{1, 2, 3}, 1}});
  CHECK(chain(t5, 3) == std::vector<ChainLink>{{{1, 2, 3}, 1}});
  CHECK_THROWS_AS(chain(t5, 6), Error);
}

TEST_CASE("build_tree agrees with brute-force clusters", "[reduction_tree]") {
  Rng rng(34);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    Prime p(std::vector<long long>{2, 3, 5, 7, 11}[static_cast<std::size_t>(uniform(rng, 0, 4))]);
    auto  x = random_configuration(static_cast<std::size_t>(uniform(rng, 3, 8)), p, 5, rng);
    auto  t = build_tree(x, p);
    CHECK(marked_tree_violations(t).empty());
    // The oracle runs on the normalized coordinates.
    std::vector<PPoint> y;
    for (auto const& pt : x) {
      y.push_back(t.normalization.apply(pt));
    }
    CHECK(brute_force_clusters(oracle_matrix(y, p)) == tree_clusters(t));
    for (auto const& e : t.edges) {
      CHECK(e.thickness >= 1);
    }
    for (std::size_t i = 1; i <= t.rank(); ++i) {
      auto links = chain(t, i);
      for (std::size_t l = 0; l < links.size(); ++l) {
        CHECK(std::binary_search(links[l].marks.begin(), links[l].marks.end(), i));
        if (l > 0) {
          CHECK(std::includes(links[l].marks.begin(), links[l].marks.end(),
                              links[l - 1].marks.begin(), links[l - 1].marks.end()));
          CHECK(links[l].marks.size() > links[l - 1].marks.size());
        }
      }
    }
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("interval order is the identity when clusters are intervals", "[reduction_tree]") {
  auto t = build_tree(pts({0, 25, 5, 1, 2}), Prime(5));
  CHECK(t.order == identity_order(5));
  auto s = build_tree(pts({0, 1, 25, 2}), Prime(5));
  CHECK(s.order == std::vector<std::size_t>{1, 3, 2, 4});
  CHECK(marked_tree_violations(s).empty());
}

TEST_CASE("distinct residues give the one-vertex tree", "[reduction_tree]") {
  Rng rng(35);
  for (long long p : {5, 7, 11, 13}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<long long> res(static_cast<std::size_t>(p));
      std::iota(res.begin(), res.end(), 0);
      std::shuffle(res.begin(), res.end(), rng);
      std::size_t         r = static_cast<std::size_t>(uniform(rng, 3, std::min<long>(8, p)));
      std::vector<PPoint> x;
      for (std::size_t i = 0; i < r; ++i) {
        x.push_back(Rational(res[i] + p * uniform(rng, -3, 3)));
      }
      auto t = build_tree(x, Prime(p));
      CHECK(is_single_vertex(t));
      CHECK(t.normalization.is_identity());
    }
  }
}

TEST_CASE("validate_local_data", "[reduction_tree]") {
  auto t73 = build_tree(pts({0, 5, 1, 2}), Prime(5));
  CHECK(validate_local_data(LocalData{t73, Prime(5)}).empty());

  MarkedTree two;
  two.vertices = {0};
  two.marks    = {0, 0};
  two.order    = identity_order(2);
  auto bad     = validate_local_data(LocalData{two, Prime(5)});
  REQUIRE(bad.size() == 1);
  CHECK_THAT(bad[0], Catch::Matchers::StartsWith("vertex below stability bound"));

  // p + 2 edges at the root, each leaf with two marks.
  MarkedTree star;
  star.vertices = {0};
  for (int v = 1; v <= 7; ++v) {
    star.vertices.push_back(v);
    star.edges.push_back(TreeEdge{v, 0, 1});
    star.marks.push_back(v);
    star.marks.push_back(v);
  }
  star.order = identity_order(star.marks.size());
  bad        = validate_local_data(LocalData{star, Prime(5)});
  REQUIRE(bad.size() == 1);
  CHECK_THAT(bad[0], Catch::Matchers::StartsWith("vertex above p+1 bound"));

  MarkedTree cyclic = t73;
  cyclic.edges.push_back(TreeEdge{0, 1, 1});
  CHECK_FALSE(validate_local_data(LocalData{cyclic, Prime(5)}).empty());
  MarkedTree thin = t73;
  thin.edges[0].thickness = 0;
  CHECK_FALSE(validate_local_data(LocalData{thin, Prime(5)}).empty());
}

TEST_CASE("tree construction rejects bad input", "[reduction_tree]") {
  CHECK_THROWS_WITH(build_tree(pts({0, 1}), Prime(3)),
                    "stable marked reduction requires at least 3 marks");
  CHECK_THROWS_AS(build_tree(pts({0, 1, 0}), Prime(3)), Error);
  CHECK_THROWS_AS(build_tree(pts({0, 5, 10, 15}), Prime(5), Mobius::identity()), Error);
}

TEST_CASE("isomorphism ignores vertex ids and labels", "[reduction_tree]") {
  auto a = build_tree(pts({0, 25, 5, 1, 2}), Prime(5));
  auto b = a;
  for (auto& v : b.vertices) {
    v += 100;
  }
  b.root += 100;
  for (auto& e : b.edges) {
    e.child += 100;
    e.parent += 100;
  }
  for (auto& m : b.marks) {
    m += 100;
  }
  CHECK(isomorphic(a, b));
  auto c = build_tree(pts({0, 125, 5, 1, 2}), Prime(5));
  CHECK_FALSE(isomorphic(a, c));
}
