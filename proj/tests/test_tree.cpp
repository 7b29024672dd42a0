#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "aaut/random.hpp"
#include "aaut/tree.hpp"

using namespace aaut;

namespace {

std::vector<Address> addrs(std::vector<std::string> const& xs) {
  std::vector<Address> out;
  for (auto const& x : xs) out.push_back(Address::parse(x));
  return out;
}

CompleteTree tree(int d, int k, std::vector<std::string> const& leaves) {
  return CompleteTree::from_leaves(TreeParams(d, k), addrs(leaves));
}

}  // namespace

TEST_CASE("address parse/print round trip and shortlex order") {
  CHECK(Address::parse("").is_root());
  CHECK(Address::parse("01z").to_string() == "01z");
  CHECK(Address::parse("01z").digit(2) == 35);
  CHECK_THROWS_AS(Address::parse("0!"), format_error);
  CHECK(Address::parse("1") < Address::parse("00"));   // shorter first
  CHECK(Address::parse("01") < Address::parse("10"));  // then lexicographic
  CHECK(Address::parse("0").is_strict_prefix_of(Address::parse("01")));
  CHECK_FALSE(Address::parse("1").is_prefix_of(Address::parse("01")));
}

TEST_CASE("is_complete") {
  TreeParams p22(2, 2);
  CHECK(is_complete(addrs({"0", "10", "11"}), p22));
  CHECK_FALSE(is_complete(addrs({"0", "10"}), p22));
  CHECK(is_complete(addrs({"0", "1", "20", "21", "22"}), TreeParams(3, 3)));
  CHECK_FALSE(is_complete(addrs({"0", "1"}), TreeParams(3, 3)));
  CHECK_FALSE(is_complete(addrs({"0", "0", "1"}), p22));
  CHECK_FALSE(is_complete(addrs({"0", "1", "10"}), p22));  // not an antichain
  CHECK_FALSE(is_complete({}, p22));
  // digit out of range for the params
  CHECK_FALSE(is_complete(addrs({"0", "12", "11", "10"}), p22));
}

TEST_CASE("union of complete trees") {
  auto a = tree(2, 2, {"0", "1"});
  auto b = tree(2, 2, {"0", "10", "11"});
  CHECK(union_trees(a, b) == b);  // containment
  auto c = tree(2, 2, {"00", "01", "1"});
  CHECK(union_trees(c, b) == tree(2, 2, {"00", "01", "10", "11"}));
  CHECK(union_trees(c, c) == c);  // idempotent
  CHECK(union_trees(c, b) == union_trees(b, c));
}

TEST_CASE("caret subtraction into components") {
  auto a = tree(2, 2, {"00", "01", "10", "11"});
  auto b = tree(2, 2, {"0", "10", "11"});
  auto comps = subtract(a, b);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].root == Address::parse("0"));
  CHECK(comps[0].relative_leaves == addrs({"0", "1"}));

  CHECK(subtract(a, a).empty());

  auto c = tree(2, 2, {"00", "01", "1"});
  comps = subtract(c, b);
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].root == Address::parse("0"));
  CHECK(comps[0].relative_leaves == addrs({"0", "1"}));
}

TEST_CASE("subtract then re-union property") {
  Rng rng(13);
  TreeParams p(3, 2);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_complete_tree(p, rng.below(5), rng);
    auto b = random_complete_tree(p, rng.below(5), rng);
    std::vector<std::vector<Address>> groups{b.leaves};
    for (auto const& comp : subtract(a, b)) {
      std::vector<Address> abs;
      for (auto const& r : comp.relative_leaves)
        abs.push_back(comp.root.concat(r));
      groups.push_back(std::move(abs));
    }
    CHECK(tree_spanned_by(p, groups) == union_trees(a, b));
  }
}

TEST_CASE("leaf count residue invariant") {
  Rng rng(7);
  for (auto [d, k] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}, {2, 3}, {4, 2}}) {
    TreeParams p(d, k);
    for (int trial = 0; trial < 30; ++trial) {
      auto t = random_complete_tree(p, rng.below(7), rng);
      CHECK(static_cast<int>(t.leaf_count()) % (d - 1) == k % (d - 1));
      CHECK(t.leaf_count() >= static_cast<std::size_t>(k));
    }
  }
}

TEST_CASE("clopen set normalization") {
  TreeParams p(2, 2);
  auto s = ClopenSet::from_balls(p, addrs({"00", "01", "1"}));
  CHECK(s.balls == addrs({"0", "1"}));  // 00,01 contract; root never does
  CHECK(s.is_full());
  CHECK(ClopenSet::empty(p).is_empty());
  CHECK_THROWS(ClopenSet::from_balls(p, addrs({"0", "01"})));

  TreeParams p32(3, 2);
  auto t = ClopenSet::from_balls(p32, addrs({"00", "01", "02", "1"}));
  CHECK(t.balls == addrs({"0", "1"}));
}

TEST_CASE("ball count residue") {
  TreeParams p33(3, 3);
  CHECK(ball_count_residue(addrs({"0"}), p33) == 1);
  CHECK(ball_count_residue(addrs({"00", "01", "02"}), p33) == 1);
  CHECK(ball_count_residue(ClopenSet::empty(p33)).is_empty);
  CHECK(ball_count_residue(ClopenSet::empty(p33)).residue == 0);
  TreeParams p42(4, 2);
  CHECK(ball_count_residue(addrs({"00", "01", "02", "03"}), p42) == 1);

  // d = 2: residue carries no information, flags do.
  TreeParams p22(2, 2);
  auto full = ClopenSet::whole_boundary(p22);
  CHECK(ball_count_residue(full).is_full);
  CHECK(ball_count_residue(full).residue == 0);
}

TEST_CASE("residue invariant under refining a ball into its children") {
  Rng rng(99);
  TreeParams p(3, 3);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_complete_tree(p, 1 + rng.below(5), rng);
    std::vector<Address> balls(t.leaves.begin(),
                               t.leaves.begin() + 1 + rng.below(t.leaf_count()));
    int r = ball_count_residue(balls, p);
    // refine a random ball
    std::size_t i = rng.below(balls.size());
    Address b = balls[i];
    balls.erase(balls.begin() + static_cast<long>(i));
    for (int c = 0; c < p.d; ++c) balls.push_back(b.child(c));
    CHECK(ball_count_residue(balls, p) == r);
  }
}
