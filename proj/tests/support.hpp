#ifndef AAUT_TESTS_SUPPORT_HPP
#define AAUT_TESTS_SUPPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "aaut/dynamics.hpp"
#include "aaut/element.hpp"
#include "aaut/random.hpp"

namespace aaut::testing {

inline Address A(std::string const& s) { return Address::parse(s); }

inline std::vector<Address> addrs(std::vector<std::string> const& xs) {
  std::vector<Address> out;
  for (auto const& x : xs) out.push_back(Address::parse(x));
  return out;
}

inline TreePair pair_of(
    int d, int k, std::vector<std::pair<std::string, std::string>> const& map) {
  std::vector<std::pair<Address, Address>> m;
  for (auto const& [a, b] : map) m.emplace_back(A(a), A(b));
  return TreePair::from_mapping(TreeParams(d, k), std::move(m));
}

inline Element elem(
    int d, int k, std::vector<std::pair<std::string, std::string>> const& map) {
  return Element::from_pair(pair_of(d, k, map));
}

// Fixtures used across the suite.
inline Element x22() {
  return elem(2, 2, {{"0", "00"}, {"10", "01"}, {"11", "1"}});
}
inline Element swap22() { return elem(2, 2, {{"0", "1"}, {"1", "0"}}); }
inline Element double_swap22() {
  return elem(2, 2, {{"00", "01"}, {"01", "00"}, {"10", "11"}, {"11", "10"}});
}
// Mixed element: one 2-cycle, one attractor, one wandering, one repeller.
inline Element g1_mixed() {
  return elem(2, 2, {{"00", "01"},
                     {"01", "00"},
                     {"10", "100"},
                     {"110", "101"},
                     {"111", "11"}});
}
// x twisted by an order-2 fixator below its attractor; conjugate to x in
// AAut(T_{2,2}) but not in V_{2,2}.
inline Element av22() {
  return elem(2, 2,
              {{"00", "001"}, {"01", "000"}, {"10", "01"}, {"11", "1"}});
}

// Iteration oracle for boundary-point classification: follow the exact
// trajectory of p and the image of a depth-`depth` ball around it for up to
// `steps` applications, and test the neighborhood-return behaviour directly.
inline PointClass empirical_classify(Element const& g, BoundaryPoint const& p,
                                     std::size_t depth = 40,
                                     std::size_t steps = 60) {
  Address ball = p.word(depth);
  BoundaryPoint q = p;
  Address w = ball;
  bool ball_ok = true;
  for (std::size_t n = 1; n <= steps; ++n) {
    q = act_point(g, q);
    if (ball_ok) {
      try {
        w = act(g, w);
      } catch (needs_refinement const&) {
        ball_ok = false;
      }
    }
    if (!ball_ok) continue;
    if (w == ball) return PointClass{PointKind::Stable, n, 0};
    if (ball.is_strict_prefix_of(w) && q == p)
      return PointClass{PointKind::Attracting, n, w.depth() - ball.depth()};
    if (w.is_strict_prefix_of(ball) && q == p)
      return PointClass{PointKind::Repelling, n, ball.depth() - w.depth()};
  }
  return PointClass{PointKind::Wandering, 0, 0};
}

// Seeded eventually periodic point valid for the params; mixes short random
// prefixes with small primitive cycles.
inline BoundaryPoint random_point(TreeParams params, Rng& rng) {
  std::string prefix;
  std::size_t plen = rng.below(7);
  for (std::size_t i = 0; i < plen; ++i) {
    int bound = (i == 0) ? params.k : params.d;
    prefix.push_back(static_cast<char>(rng.below(bound)));
  }
  std::string cycle;
  std::size_t clen = 1 + rng.below(4);
  for (std::size_t i = 0; i < clen; ++i) {
    int bound = prefix.empty() && i == 0 ? params.k : params.d;
    // keep letters inside [0, min(d,k)) when they may rotate to the front
    bound = std::min(bound, params.d);
    if (prefix.empty()) bound = std::min(bound, params.k);
    cycle.push_back(static_cast<char>(rng.below(bound)));
  }
  return BoundaryPoint(Address(prefix), Address(cycle), params);
}

}  // namespace aaut::testing

#endif
