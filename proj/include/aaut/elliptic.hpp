#ifndef AAUT_ELLIPTIC_HPP
#define AAUT_ELLIPTIC_HPP

#include <map>
#include <set>
#include <vector>

#include "aaut/dynamics.hpp"
#include "aaut/element.hpp"

namespace aaut {

// Orbital type of an elliptic Higman-Thompson element: the quotient forest of
// its action outside a fixed tree. For these elements every component is a
// full d-ary tree with constant label equal to its kappa-cycle length, so the
// type is a multiset of labeled constant components.
struct ConstantComponent {
  std::size_t label;         // cycle length
  std::size_t multiplicity;  // number of such components
  bool operator==(ConstantComponent const&) const = default;
  auto operator<=>(ConstantComponent const&) const = default;
};

struct OrbitalType {
  std::vector<ConstantComponent> components;  // sorted by label
  TreePair source;                            // the revealing [kappa, T, T]
};

// The trim-equivalence invariant: label set plus per-label multiplicity
// residues mod d-1.
struct BotInvariant {
  std::set<std::size_t> label_set;
  std::map<std::size_t, int> residues;  // label -> multiplicity mod (d-1)
  bool operator==(BotInvariant const&) const = default;
};

OrbitalType orbital_type(Element const& g);

BotInvariant bot_invariant(OrbitalType const& t, int d);

bool elliptic_conjugate(Element const& g, Element const& h);

// Conjugacy into Aut(T_{2,2}) for elliptic elements: all labels powers of 2.
bool is_autT_conjugate_elliptic_t22(Element const& g);

// EXPERIMENTAL: label test for general Aut(T) orbital types (every label n
// has all prime factors <= d and d^2 does not divide n). Known to disagree
// with the T_{2,2} test above for d = 2; excluded from acceptance gating.
bool is_autT_orbital_type(OrbitalType const& t, int d);

}  // namespace aaut

#endif
