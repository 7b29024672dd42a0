#include "aaut/elliptic.hpp"

#include <algorithm>

namespace aaut {

OrbitalType orbital_type(Element const& g) {
  require(is_elliptic(g), "orbital_type: element is not elliptic");
  TreePair rp = make_revealing(g);
  ensure(rp.domain == rp.range_tree(),
         "orbital_type: elliptic revealing pair must have equal trees");
  std::map<std::size_t, std::size_t> by_label;
  std::size_t total = 0;
  for (auto const& c : chains(rp)) {
    ensure(c.kind == ChainKind::Periodic, "orbital_type: non-periodic chain");
    by_label[c.cycle_length()] += 1;
    total += c.cycle_length();
  }
  ensure(total == rp.domain.leaf_count(),
         "orbital_type: labels do not sum to the leaf count");
  OrbitalType t;
  t.source = std::move(rp);
  for (auto const& [label, mult] : by_label)
    t.components.push_back(ConstantComponent{label, mult});
  return t;
}

BotInvariant bot_invariant(OrbitalType const& t, int d) {
  BotInvariant b;
  for (auto const& c : t.components) {
    b.label_set.insert(c.label);
    b.residues[c.label] =
        static_cast<int>(c.multiplicity % static_cast<std::size_t>(d - 1));
  }
  return b;
}

bool elliptic_conjugate(Element const& g, Element const& h) {
  require(g.params() == h.params(), "elliptic_conjugate: parameter mismatch");
  require(is_elliptic(g) && is_elliptic(h),
          "elliptic_conjugate: inputs must be elliptic");
  int d = g.params().d;
  return bot_invariant(orbital_type(g), d) == bot_invariant(orbital_type(h), d);
}

bool is_autT_conjugate_elliptic_t22(Element const& g) {
  require(g.params() == TreeParams(2, 2),
          "is_autT_conjugate_elliptic_t22: needs d = k = 2");
  OrbitalType t = orbital_type(g);
  for (auto const& c : t.components) {
    std::size_t n = c.label;
    while (n % 2 == 0) n /= 2;
    if (n != 1) return false;
  }
  return true;
}

bool is_autT_orbital_type(OrbitalType const& t, int d) {
  for (auto const& c : t.components) {
    std::size_t n = c.label;
    if (n % (static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) == 0)
      return false;
    for (std::size_t p = 2; p * p <= n; ++p)
      while (n % p == 0) {
        if (p > static_cast<std::size_t>(d)) return false;
        n /= p;
      }
    if (n > static_cast<std::size_t>(d) && n > 1) return false;
  }
  return true;
}

}  // namespace aaut
