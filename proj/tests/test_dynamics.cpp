#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "support.hpp"

using namespace aaut;
using namespace aaut::testing;

namespace {

using PeriodLength = std::multiset<std::pair<std::size_t, std::size_t>>;

PeriodLength period_lengths(std::vector<FixedPointRecord> const& rs) {
  PeriodLength out;
  for (auto const& r : rs) out.insert({r.period, r.length});
  return out;
}

}  // namespace

TEST_CASE("boundary point normal form") {
  TreeParams p(2, 2);
  BoundaryPoint a(A("0"), A("0"), p);
  CHECK(a.to_string() == "/(0)");
  BoundaryPoint b(A(""), A("0"), p);
  CHECK(a == b);
  // non-primitive cycles collapse
  BoundaryPoint c(A(""), A("0101"), p);
  CHECK(c.cycle() == A("01"));
  // prefix tail rotates into the cycle
  BoundaryPoint d(A("10"), A("10"), p);
  CHECK(d.to_string() == "/(10)");
  BoundaryPoint e(A("1"), A("01"), p);
  CHECK(d == e);
  CHECK(BoundaryPoint::parse("10/(01)", p).to_string() == "10/(01)");
  CHECK_THROWS_AS(BoundaryPoint::parse("10", p), format_error);
  CHECK(d.word(5) == A("10101"));
}

TEST_CASE("act_point") {
  Element x = x22();
  TreeParams p(2, 2);
  // 0^inf is fixed, 1^inf is fixed, the wandering ball moves
  CHECK(act_point(x, BoundaryPoint(A(""), A("0"), p)) ==
        BoundaryPoint(A(""), A("0"), p));
  CHECK(act_point(x, BoundaryPoint(A(""), A("1"), p)) ==
        BoundaryPoint(A(""), A("1"), p));
  CHECK(act_point(x, BoundaryPoint(A("10"), A("1"), p)) ==
        BoundaryPoint(A("01"), A("1"), p));
  // consuming into the cycle region rotates the cycle: 0(10)^inf -> 00(10)^inf
  CHECK(act_point(x, BoundaryPoint(A(""), A("01"), p)) ==
        BoundaryPoint(A("0"), A("01"), p));
}

TEST_CASE("classify_point fixtures") {
  Element x = x22();
  TreeParams p(2, 2);
  CHECK(classify_point(x, BoundaryPoint(A(""), A("0"), p)) ==
        PointClass{PointKind::Attracting, 1, 1});
  CHECK(classify_point(x, BoundaryPoint(A(""), A("1"), p)) ==
        PointClass{PointKind::Repelling, 1, 1});
  CHECK(classify_point(x, BoundaryPoint(A("10"), A("1"), p)) ==
        PointClass{PointKind::Wandering, 0, 0});
  CHECK(classify_point(Element::identity(p), BoundaryPoint(A("01"), A("1"), p)) ==
        PointClass{PointKind::Stable, 1, 0});
  CHECK(classify_point(swap22(), BoundaryPoint(A(""), A("01"), p)) ==
        PointClass{PointKind::Stable, 2, 0});
}

TEST_CASE("dynamics_report fixtures") {
  TreeParams p(2, 2);
  auto rx = dynamics_report(x22());
  REQUIRE(rx.attractors.size() == 1);
  CHECK(rx.attractors[0].point == BoundaryPoint(A(""), A("0"), p));
  CHECK(rx.attractors[0].period == 1);
  CHECK(rx.attractors[0].length == 1);
  REQUIRE(rx.repellers.size() == 1);
  CHECK(rx.repellers[0].point == BoundaryPoint(A(""), A("1"), p));
  CHECK(rx.stable_region.is_empty());
  CHECK(rx.wandering_region_closure.is_full());
  CHECK(rx.support_full);

  auto rs = dynamics_report(swap22());
  CHECK(rs.attractors.empty());
  CHECK(rs.repellers.empty());
  CHECK(rs.stable_region.is_full());
  CHECK(rs.support_full);

  auto ri = dynamics_report(Element::identity(p));
  CHECK(ri.stable_region.is_full());
  CHECK_FALSE(ri.support_full);
}

TEST_CASE("stable and wandering closure partition the boundary") {
  Rng rng(17);
  for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {2, 3}}) {
    TreeParams p(d, k);
    for (int i = 0; i < 30; ++i) {
      auto rep = dynamics_report(random_element(p, rng.below(8), rng));
      std::vector<Address> all = rep.stable_region.balls;
      all.insert(all.end(), rep.wandering_region_closure.balls.begin(),
                 rep.wandering_region_closure.balls.end());
      CHECK(ClopenSet::from_balls(p, all).is_full());
    }
  }
}

TEST_CASE("elliptic / hyperbolic predicates") {
  TreeParams p(2, 2);
  CHECK(is_elliptic(swap22()));
  CHECK(is_elliptic(Element::identity(p)));
  CHECK_FALSE(is_elliptic(x22()));

  CHECK(is_hyperbolic(x22()));
  CHECK_FALSE(is_hyperbolic(swap22()));
  CHECK_FALSE(is_hyperbolic(Element::identity(p)));

  CHECK(support_is_full(x22()));
  CHECK_FALSE(support_is_full(Element::identity(p)));
  CHECK(support_is_full(g1_mixed()));
}

TEST_CASE("eh decomposition fixtures") {
  TreeParams p(2, 2);
  auto [ge, gh] = eh_decompose(g1_mixed());
  CHECK(ge == elem(2, 2, {{"00", "01"}, {"01", "00"}, {"1", "1"}}));
  CHECK(gh == elem(2, 2, {{"0", "0"},
                          {"10", "100"},
                          {"110", "101"},
                          {"111", "11"}}));
  CHECK(compose(ge, gh) == g1_mixed());

  auto [se, sh] = eh_decompose(swap22());
  CHECK(se == swap22());
  CHECK(sh == Element::identity(p));

  auto [xe, xh] = eh_decompose(x22());
  CHECK(xe == Element::identity(p));
  CHECK(xh == x22());
}

TEST_CASE("eh decomposition properties") {
  Rng rng(23);
  for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
    TreeParams p(d, k);
    for (int i = 0; i < 40; ++i) {
      Element g = random_element(p, rng.below(8), rng);
      auto [ge, gh] = eh_decompose(g);
      CHECK(compose(ge, gh) == g);
      CHECK(is_elliptic(ge));
      CHECK((gh.is_identity() || is_hyperbolic(gh)));
      // idempotence of the split
      auto [gee, geh] = eh_decompose(ge);
      CHECK(gee == ge);
      CHECK(geh == Element::identity(p));
      auto [ghe, ghh] = eh_decompose(gh);
      CHECK(ghe == Element::identity(p));
      CHECK(ghh == gh);
      // factors commute (disjoint supports)
      CHECK(compose(gh, ge) == g);
    }
  }
}

TEST_CASE("attractors of g are repellers of the inverse") {
  Rng rng(29);
  TreeParams p(2, 2);
  for (int i = 0; i < 60; ++i) {
    Element g = random_element(p, rng.below(9), rng);
    auto r1 = dynamics_report(g);
    auto r2 = dynamics_report(inverse(g));
    CHECK(period_lengths(r1.attractors) == period_lengths(r2.repellers));
    CHECK(period_lengths(r1.repellers) == period_lengths(r2.attractors));
  }
}

TEST_CASE("dynamics data is invariant under conjugation") {
  Rng rng(37);
  TreeParams p(2, 2);
  for (int i = 0; i < 40; ++i) {
    Element g = random_element(p, rng.below(7), rng);
    Element a = random_element(p, rng.below(7), rng);
    Element h = compose(a, compose(g, inverse(a)));
    auto r1 = dynamics_report(g);
    auto r2 = dynamics_report(h);
    CHECK(period_lengths(r1.attractors) == period_lengths(r2.attractors));
    CHECK(period_lengths(r1.repellers) == period_lengths(r2.repellers));
    CHECK(r1.support_full == r2.support_full);
  }
}

TEST_CASE("classify_point agrees with the iteration oracle") {
  Rng rng(43);
  for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
    TreeParams p(d, k);
    for (int i = 0; i < 25; ++i) {
      Element g = random_element(p, rng.below(8), rng);
      auto rep = dynamics_report(g);
      std::vector<BoundaryPoint> pts;
      for (auto const& a : rep.attractors) pts.push_back(a.point);
      for (auto const& r : rep.repellers) pts.push_back(r.point);
      for (int j = 0; j < 15; ++j) pts.push_back(random_point(p, rng));
      for (auto const& pt : pts)
        CHECK(classify_point(g, pt) == empirical_classify(g, pt));
    }
  }
}
