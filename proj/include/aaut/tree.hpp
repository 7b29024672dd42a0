#ifndef AAUT_TREE_HPP
#define AAUT_TREE_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "aaut/error.hpp"

namespace aaut {

// Parameters of the quasi-regular rooted tree T_{d,k}: the root has k
// children, every other vertex has d children.
struct TreeParams {
  int d = 2;
  int k = 2;

  TreeParams() = default;
  TreeParams(int d_, int k_) : d(d_), k(k_) {
    require(d >= 2 && k >= 1, "tree parameters need d >= 2, k >= 1");
    require(d <= 36 && k <= 36, "format caps d, k at 36");
  }
  bool operator==(TreeParams const&) const = default;
};

// A vertex of T_{d,k}, as its digit path from the root. The empty sequence is
// the root; the first digit is in [0,k), all later digits in [0,d). Digits are
// stored as raw byte values. The total (plane) order is shortlex.
class Address {
 public:
  Address() = default;
  explicit Address(std::string raw_digits) : digits_(std::move(raw_digits)) {}

  static Address root() { return Address(); }
  static Address parse(std::string const& text);  // base-36 characters

  bool is_root() const { return digits_.empty(); }
  std::size_t depth() const { return digits_.size(); }
  int digit(std::size_t i) const {
    return static_cast<unsigned char>(digits_[i]);
  }
  std::string const& digits() const { return digits_; }

  Address child(int digit) const {
    Address a = *this;
    a.digits_.push_back(static_cast<char>(digit));
    return a;
  }
  Address parent() const {
    require(!is_root(), "root has no parent");
    Address a = *this;
    a.digits_.pop_back();
    return a;
  }
  int last_digit() const {
    require(!is_root(), "root has no last digit");
    return static_cast<unsigned char>(digits_.back());
  }

  bool is_prefix_of(Address const& other) const {
    return other.digits_.size() >= digits_.size() &&
           other.digits_.compare(0, digits_.size(), digits_) == 0;
  }
  bool is_strict_prefix_of(Address const& other) const {
    return depth() < other.depth() && is_prefix_of(other);
  }
  // The suffix of `other` below this vertex; precondition: prefix.
  Address suffix_of(Address const& other) const {
    require(is_prefix_of(other), "suffix_of: not a prefix");
    return Address(other.digits_.substr(digits_.size()));
  }
  Address concat(Address const& below) const {
    return Address(digits_ + below.digits_);
  }

  bool valid_for(TreeParams const& p) const;
  // Valid as a relative address inside a d-ary subtree (all digits < d).
  bool valid_relative(int d) const;

  std::string to_string() const;  // "" for the root

  // Shortlex: by depth, then lexicographically. This is the fixed plane
  // order on T_{d,k}.
  friend std::strong_ordering operator<=>(Address const& a, Address const& b) {
    if (auto c = a.digits_.size() <=> b.digits_.size(); c != 0) return c;
    int c = a.digits_.compare(b.digits_);
    return c < 0    ? std::strong_ordering::less
           : c == 0 ? std::strong_ordering::equal
                    : std::strong_ordering::greater;
  }
  friend bool operator==(Address const& a, Address const& b) {
    return a.digits_ == b.digits_;
  }

 private:
  std::string digits_;
};

// A finite complete subtree of T_{d,k}, stored as its sorted leaf antichain.
// Always contains the root caret, so |leaves| >= k and
// |leaves| == k (mod d-1).
struct CompleteTree {
  TreeParams params;
  std::vector<Address> leaves;  // sorted shortlex

  static CompleteTree minimal(TreeParams p);
  // Validates and sorts. Throws format_error if not a complete antichain.
  static CompleteTree from_leaves(TreeParams p, std::vector<Address> ls);

  std::size_t leaf_count() const { return leaves.size(); }
  // Total carets, the root caret included.
  long caret_count() const {
    return 1 + (static_cast<long>(leaves.size()) - params.k) / (params.d - 1);
  }
  bool has_leaf(Address const& a) const;
  // Interior = root plus every proper prefix of a leaf.
  bool is_interior(Address const& a) const;
  bool is_vertex(Address const& a) const {
    return is_interior(a) || has_leaf(a);
  }
  // Index of the unique leaf that `a` descends from (or equals), if any.
  std::optional<std::size_t> leaf_at_or_above(Address const& a) const;

  bool operator==(CompleteTree const&) const = default;
};

// One maximal subtree of a caret difference a \ b: its root plus the caret
// set below it, kept as leaf suffixes relative to the root.
struct TreeComponent {
  Address root;
  std::vector<Address> relative_leaves;  // sorted, purely d-ary digits
  long caret_count(int d) const {
    return (static_cast<long>(relative_leaves.size()) - 1) / (d - 1);
  }
};

// A clopen subset of the boundary, as a normalized antichain of balls:
// whenever all d children of a non-root vertex are present they are replaced
// by the parent. Empty antichain = empty set.
struct ClopenSet {
  TreeParams params;
  std::vector<Address> balls;  // sorted shortlex, normalized

  static ClopenSet empty(TreeParams p) { return ClopenSet{p, {}}; }
  static ClopenSet whole_boundary(TreeParams p);
  static ClopenSet from_balls(TreeParams p, std::vector<Address> balls);

  bool is_empty() const { return balls.empty(); }
  bool is_full() const;
  bool operator==(ClopenSet const&) const = default;
};

// Number of balls in any partition of the set, reduced mod d-1, together with
// the empty/full flags that carry the remaining information when d = 2.
struct BallResidue {
  int residue = 0;  // in [0, d-1); always 0 when d = 2
  bool is_empty = false;
  bool is_full = false;
  bool operator==(BallResidue const&) const = default;
};

bool is_complete(std::vector<Address> const& leaves, TreeParams const& params);

CompleteTree union_trees(CompleteTree const& a, CompleteTree const& b);

// Smallest complete tree whose leaf set refines every given antichain. Used
// for unions and for grafting component shapes onto a tree.
CompleteTree tree_spanned_by(TreeParams params,
                             std::vector<std::vector<Address>> const& groups);

// Caret subtraction a \ b, grouped into maximal subtrees.
std::vector<TreeComponent> subtract(CompleteTree const& a,
                                    CompleteTree const& b);

BallResidue ball_count_residue(ClopenSet const& s);
// Residue of an arbitrary ball antichain (invariant under refinement).
int ball_count_residue(std::vector<Address> const& balls,
                       TreeParams const& params);

}  // namespace aaut

#endif
