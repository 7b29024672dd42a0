#ifndef AAUT_ELEMENT_HPP
#define AAUT_ELEMENT_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aaut/tree.hpp"

namespace aaut {

// Two finite complete subtrees with a leaf bijection kappa. The image vector
// is parallel to domain.leaves; the range tree is the sorted image.
struct TreePair {
  TreeParams params;
  CompleteTree domain;
  std::vector<Address> image;  // image[i] = kappa(domain.leaves[i])

  // `image` runs parallel to the (shortlex-sorted) domain leaves.
  static TreePair make(TreeParams params, CompleteTree domain,
                       std::vector<Address> image);
  // Mapping given as (domain leaf, image) pairs in any order.
  static TreePair from_mapping(
      TreeParams params, std::vector<std::pair<Address, Address>> mapping);
  static TreePair identity(TreeParams params);

  CompleteTree range_tree() const;
  Address apply(Address const& domain_leaf) const;   // kappa
  std::optional<Address> apply_opt(Address const& leaf) const;
  std::optional<Address> unapply_opt(Address const& leaf) const;  // kappa^-1

  bool operator==(TreePair const&) const = default;
};

enum class ChainKind { Attractor, Repeller, Periodic, Wandering, Other };

std::string to_string(ChainKind k);

// An orbit of leaves under the partial action of kappa.
struct MaximalChain {
  std::vector<Address> vertices;  // (x_0, ..., x_n)
  ChainKind kind = ChainKind::Other;
  // Relative address between x_0 and x_n when one descends from the other:
  // attractor: x_n = x_0 . spine; repeller: x_0 = x_n . spine.
  std::optional<Address> spine;

  // Number of kappa-steps; the attractor/repeller period.
  std::size_t period() const { return vertices.size() - 1; }
  // For periodic chains: the cycle length (vertex count).
  std::size_t cycle_length() const { return vertices.size(); }
  Address const& front() const { return vertices.front(); }
  Address const& back() const { return vertices.back(); }
};

// A Higman-Thompson almost automorphism in canonical (fully contracted) form.
// Immutable; equality is equality of the canonical pairs.
class Element {
 public:
  static Element from_pair(TreePair const& p) { return Element(canonical(p)); }
  static Element identity(TreeParams params) {
    return Element(TreePair::identity(params));
  }

  TreePair const& pair() const { return pair_; }
  TreeParams const& params() const { return pair_.params; }
  bool is_identity() const;

  bool operator==(Element const& other) const { return pair_ == other.pair_; }
  bool operator!=(Element const& other) const { return !(*this == other); }

 private:
  friend Element trusted_canonical(TreePair p);
  explicit Element(TreePair p) : pair_(std::move(p)) {}
  static TreePair canonical(TreePair p);
  TreePair pair_;
};

// Internal fast path: wraps a pair already known to be fully contracted.
Element trusted_canonical(TreePair p);

Element canonicalize(TreePair const& p);

// Tree pair of e with the requested (larger) domain; range is the exact
// pushforward through the plane-order-preserving extension.
TreePair refine(Element const& e, CompleteTree const& new_domain);
// Same with a prescribed range.
TreePair refine_to_range(Element const& e, CompleteTree const& new_range);

// compose(g, h) applies h first.
Element compose(Element const& g, Element const& h);
Element inverse(Element const& g);

// Image of an address at or below a domain leaf. Throws needs_refinement if
// w is a proper prefix of a domain leaf.
Address act(Element const& g, Address const& w);

std::vector<MaximalChain> chains(TreePair const& p);

bool is_revealing(TreePair const& p);

enum class RollDirection { Forward, Backward };

// Def-2.10 rolling of a tree pair of g along a maximal chain. The glued tree
// is given by its leaf suffixes relative to the chain's proper end (x_0 for
// forward rollings, x_n for backward ones); the empty shape is a no-op.
TreePair roll(Element const& g, TreePair const& p, MaximalChain const& chain,
              std::vector<Address> const& relative_tree, RollDirection dir);

// A revealing pair of g containing g's canonical pair.
TreePair make_revealing(Element const& g);
// A revealing pair containing the given pair (constructive Lemma-2.13 form).
TreePair make_revealing_from(Element const& g, TreePair p);

// The element acting as `inner` (an element of T_{d,d}) inside the ball at
// `at`, and as the identity elsewhere. Handy for building fixator twists.
Element embed_in_ball(TreeParams params, Address const& at,
                      Element const& inner);

// Frozen "aaut v1" text form; parsing lives in io.hpp.
std::string serialize(Element const& e);
std::string serialize(TreePair const& p);

}  // namespace aaut

#endif
