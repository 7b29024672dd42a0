#include "aaut/element.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace aaut {

TreePair TreePair::make(TreeParams params, CompleteTree domain,
                        std::vector<Address> image) {
  require(domain.params == params, "tree pair: domain parameter mismatch");
  require(domain.leaves.size() == image.size(),
          "tree pair: leaf counts differ");
  TreePair p{params, std::move(domain), std::move(image)};
  ensure(std::is_sorted(p.domain.leaves.begin(), p.domain.leaves.end()),
         "tree pair: domain leaves not sorted");
  std::vector<Address> sorted = p.image;
  std::sort(sorted.begin(), sorted.end());
  if (!is_complete(sorted, params))
    throw format_error("tree pair: image is not a complete antichain");
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i] == sorted[i + 1])
      throw format_error("tree pair: image is not a bijection");
  return p;
}

TreePair TreePair::from_mapping(
    TreeParams params, std::vector<std::pair<Address, Address>> mapping) {
  std::sort(mapping.begin(), mapping.end(),
            [](auto const& a, auto const& b) { return a.first < b.first; });
  std::vector<Address> leaves, image;
  leaves.reserve(mapping.size());
  image.reserve(mapping.size());
  for (auto& [dom, img] : mapping) {
    leaves.push_back(std::move(dom));
    image.push_back(std::move(img));
  }
  CompleteTree domain = CompleteTree::from_leaves(params, leaves);
  ensure(domain.leaves == leaves, "from_mapping: duplicate domain leaves");
  return make(params, std::move(domain), std::move(image));
}

TreePair TreePair::identity(TreeParams params) {
  CompleteTree t = CompleteTree::minimal(params);
  std::vector<Address> image = t.leaves;
  return TreePair{params, std::move(t), std::move(image)};
}

CompleteTree TreePair::range_tree() const {
  std::vector<Address> sorted = image;
  std::sort(sorted.begin(), sorted.end());
  return CompleteTree{params, std::move(sorted)};
}

Address TreePair::apply(Address const& domain_leaf) const {
  auto r = apply_opt(domain_leaf);
  require(r.has_value(), "kappa: not a domain leaf");
  return *r;
}

std::optional<Address> TreePair::apply_opt(Address const& leaf) const {
  auto it = std::lower_bound(domain.leaves.begin(), domain.leaves.end(), leaf);
  if (it == domain.leaves.end() || *it != leaf) return std::nullopt;
  return image[static_cast<std::size_t>(it - domain.leaves.begin())];
}

std::optional<Address> TreePair::unapply_opt(Address const& leaf) const {
  for (std::size_t i = 0; i < image.size(); ++i)
    if (image[i] == leaf) return domain.leaves[i];
  return std::nullopt;
}

std::string to_string(ChainKind k) {
  switch (k) {
    case ChainKind::Attractor: return "attractor";
    case ChainKind::Repeller: return "repeller";
    case ChainKind::Periodic: return "periodic";
    case ChainKind::Wandering: return "wandering";
    case ChainKind::Other: return "other";
  }
  return "?";
}

TreePair Element::canonical(TreePair p) {
  // Contract every non-root vertex x whose d children are all domain leaves
  // mapped in plane order onto the d children of a single non-root vertex y.
  int const d = p.params.d;
  auto image_of = [&](Address const& leaf) -> Address const* {
    auto it =
        std::lower_bound(p.domain.leaves.begin(), p.domain.leaves.end(), leaf);
    if (it == p.domain.leaves.end() || *it != leaf) return nullptr;
    return &p.image[static_cast<std::size_t>(it - p.domain.leaves.begin())];
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < p.domain.leaves.size(); ++i) {
      Address const& leaf = p.domain.leaves[i];
      Address const& img = p.image[i];
      if (leaf.is_root() || leaf.last_digit() != 0 || leaf.depth() < 2) continue;
      if (img.is_root() || img.last_digit() != 0 || img.depth() < 2) continue;
      Address x = leaf.parent();
      Address y = img.parent();
      bool contractible = true;
      for (int c = 1; c < d && contractible; ++c) {
        Address const* im = image_of(x.child(c));
        contractible = im != nullptr && *im == y.child(c);
      }
      if (!contractible) continue;
      std::vector<std::pair<Address, Address>> kept;
      kept.reserve(p.domain.leaves.size());
      for (std::size_t j = 0; j < p.domain.leaves.size(); ++j)
        if (!x.is_prefix_of(p.domain.leaves[j]))
          kept.emplace_back(p.domain.leaves[j], p.image[j]);
      kept.emplace_back(x, y);
      std::sort(kept.begin(), kept.end(),
                [](auto const& a, auto const& b) { return a.first < b.first; });
      std::vector<Address> ls, im;
      ls.reserve(kept.size());
      im.reserve(kept.size());
      for (auto& [a, b] : kept) {
        ls.push_back(std::move(a));
        im.push_back(std::move(b));
      }
      p.domain.leaves = std::move(ls);
      p.image = std::move(im);
      changed = true;
      break;
    }
  }
  return p;
}

Element trusted_canonical(TreePair p) { return Element(std::move(p)); }

Element canonicalize(TreePair const& p) { return Element::from_pair(p); }

bool Element::is_identity() const {
  return pair_.domain.leaves == pair_.image;
}

TreePair refine(Element const& e, CompleteTree const& new_domain) {
  TreePair const& p = e.pair();
  require(new_domain.params == p.params, "refine: parameter mismatch");
  for (auto const& leaf : p.domain.leaves)
    require(new_domain.is_vertex(leaf),
            "refine: requested domain does not contain the canonical domain");
  std::vector<Address> image;
  image.reserve(new_domain.leaves.size());
  for (auto const& nl : new_domain.leaves) {
    auto idx = p.domain.leaf_at_or_above(nl);
    ensure(idx.has_value(), "refine: leaf not below any domain leaf");
    Address const& x = p.domain.leaves[*idx];
    image.push_back(p.image[*idx].concat(x.suffix_of(nl)));
  }
  // the pushforward of a complete tree is complete; skip re-validation
  return TreePair{p.params, new_domain, std::move(image)};
}

TreePair refine_to_range(Element const& e, CompleteTree const& new_range) {
  TreePair q = refine(inverse(e), new_range);
  // Invert: domain = sorted image of q, image = q's domain leaves.
  std::vector<std::pair<Address, Address>> swapped;
  swapped.reserve(q.image.size());
  for (std::size_t i = 0; i < q.image.size(); ++i)
    swapped.emplace_back(std::move(q.image[i]), std::move(q.domain.leaves[i]));
  std::sort(swapped.begin(), swapped.end(),
            [](auto const& a, auto const& b) { return a.first < b.first; });
  std::vector<Address> ls, im;
  ls.reserve(swapped.size());
  im.reserve(swapped.size());
  for (auto& [a, b] : swapped) {
    ls.push_back(std::move(a));
    im.push_back(std::move(b));
  }
  return TreePair{q.params, CompleteTree{q.params, std::move(ls)},
                  std::move(im)};
}

Element compose(Element const& g, Element const& h) {
  require(g.params() == h.params(), "compose: parameter mismatch");
  CompleteTree mid = union_trees(h.pair().range_tree(), g.pair().domain);
  TreePair hp = refine_to_range(h, mid);
  TreePair gp = refine(g, mid);
  std::vector<Address> image;
  image.reserve(hp.image.size());
  for (auto const& m : hp.image) image.push_back(gp.apply(m));
  return Element::from_pair(
      TreePair{g.params(), std::move(hp.domain), std::move(image)});
}

Element inverse(Element const& g) {
  TreePair const& p = g.pair();
  std::vector<std::pair<Address, Address>> swapped;
  swapped.reserve(p.image.size());
  for (std::size_t i = 0; i < p.image.size(); ++i)
    swapped.emplace_back(p.image[i], p.domain.leaves[i]);
  std::sort(swapped.begin(), swapped.end(),
            [](auto const& a, auto const& b) { return a.first < b.first; });
  std::vector<Address> ls, im;
  ls.reserve(swapped.size());
  im.reserve(swapped.size());
  for (auto& [a, b] : swapped) {
    ls.push_back(std::move(a));
    im.push_back(std::move(b));
  }
  // the inverse of a fully contracted pair is fully contracted
  return trusted_canonical(
      TreePair{p.params, CompleteTree{p.params, std::move(ls)}, std::move(im)});
}

Address act(Element const& g, Address const& w) {
  require(w.valid_for(g.params()), "act: address invalid for parameters");
  TreePair const& p = g.pair();
  Address cur = Address::root();
  for (std::size_t i = 0; i < w.depth(); ++i) {
    cur = cur.child(w.digit(i));
    if (p.domain.has_leaf(cur))
      return p.apply(cur).concat(cur.suffix_of(w));
  }
  throw needs_refinement(w.to_string());
}

std::vector<MaximalChain> chains(TreePair const& p) {
  std::set<Address> range_set(p.image.begin(), p.image.end());
  std::set<Address> visited;
  CompleteTree range = p.range_tree();
  std::vector<MaximalChain> out;

  auto classify = [&](MaximalChain& c, bool cyclic) {
    if (cyclic) {
      c.kind = ChainKind::Periodic;
      return;
    }
    Address const& x0 = c.front();
    Address const& xn = c.back();
    if (x0.is_strict_prefix_of(xn)) {
      c.kind = ChainKind::Attractor;
      c.spine = x0.suffix_of(xn);
    } else if (xn.is_strict_prefix_of(x0)) {
      c.kind = ChainKind::Repeller;
      c.spine = xn.suffix_of(x0);
    } else if (!range.is_vertex(x0) && !p.domain.is_vertex(xn)) {
      c.kind = ChainKind::Wandering;
    } else {
      c.kind = ChainKind::Other;
    }
  };

  // Terminal chains start at domain leaves that are not range leaves.
  for (auto const& start : p.domain.leaves) {
    if (range_set.count(start)) continue;
    MaximalChain c;
    Address cur = start;
    c.vertices.push_back(cur);
    while (auto next = p.apply_opt(cur)) {
      cur = *next;
      c.vertices.push_back(cur);
      visited.insert(cur);
    }
    visited.insert(start);
    classify(c, false);
    out.push_back(std::move(c));
  }
  // Remaining domain leaves lie on cycles.
  for (auto const& start : p.domain.leaves) {
    if (visited.count(start)) continue;
    MaximalChain c;
    Address cur = start;
    do {
      c.vertices.push_back(cur);
      visited.insert(cur);
      cur = p.apply(cur);
    } while (cur != start);
    classify(c, true);
    out.push_back(std::move(c));
  }
  return out;
}

bool is_revealing(TreePair const& p) {
  for (auto const& c : chains(p))
    if (c.kind == ChainKind::Other) return false;
  return true;
}

namespace {

// Leaves of a subtree rooted at `root` with the given relative leaf shape.
std::vector<Address> graft(Address const& root,
                           std::vector<Address> const& relative) {
  std::vector<Address> out;
  out.reserve(relative.size());
  for (auto const& r : relative) out.push_back(root.concat(r));
  return out;
}

}  // namespace

TreePair roll(Element const& g, TreePair const& p, MaximalChain const& chain,
              std::vector<Address> const& relative_tree, RollDirection dir) {
  require(canonicalize(p) == g, "roll: pair does not induce the element");
  for (auto const& r : relative_tree)
    require(!r.is_root() && r.valid_relative(p.params.d),
            "roll: glued tree must be a nonempty d-ary shape");
  if (relative_tree.empty()) return p;
  // The shape travels along the chain by plane-order-preserving maps, so the
  // glued copies are the same shape at every chain vertex; the direction only
  // fixes which end the input tree is rooted at.
  (void)dir;

  std::size_t n = chain.period();
  bool cyclic = chain.kind == ChainKind::Periodic;
  std::vector<std::vector<Address>> domain_groups{p.domain.leaves};
  std::vector<std::vector<Address>> range_groups{p.range_tree().leaves};
  for (std::size_t i = 0; i < chain.vertices.size(); ++i) {
    bool in_domain = cyclic || i < n;      // x_0 .. x_{n-1}
    bool in_range = cyclic || i > 0;       // x_1 .. x_n
    if (in_domain)
      domain_groups.push_back(graft(chain.vertices[i], relative_tree));
    if (in_range)
      range_groups.push_back(graft(chain.vertices[i], relative_tree));
  }
  CompleteTree new_domain = tree_spanned_by(p.params, domain_groups);
  TreePair rolled = refine(g, new_domain);
  CompleteTree expected_range = tree_spanned_by(p.params, range_groups);
  ensure(rolled.range_tree() == expected_range,
         "roll: pushforward range disagrees with the rolling formula");
  return rolled;
}

namespace {

struct FakeComponent {
  TreeComponent comp;
  MaximalChain chain;
};

// Fake attracting components (no attractor) live in T2 \ T1 and are rolled
// forward; fake repelling ones live in T1 \ T2 and are rolled backward.
std::vector<FakeComponent> fake_components(TreePair const& p, bool attracting) {
  CompleteTree range = p.range_tree();
  std::vector<TreeComponent> comps =
      attracting ? subtract(range, p.domain) : subtract(p.domain, range);
  std::vector<MaximalChain> cs = chains(p);
  std::vector<FakeComponent> out;
  for (auto& comp : comps) {
    MaximalChain const* found = nullptr;
    for (auto const& c : cs) {
      if (attracting ? c.front() == comp.root : c.back() == comp.root) {
        found = &c;
        break;
      }
    }
    ensure(found != nullptr, "component root is not a chain endpoint");
    if (found->kind == ChainKind::Other)
      out.push_back(FakeComponent{std::move(comp), *found});
  }
  return out;
}

long fake_caret_total(std::vector<FakeComponent> const& fs, int d) {
  long total = 0;
  for (auto const& f : fs) total += f.comp.caret_count(d);
  return total;
}

// One phase: roll away all fake components of one kind, guarding the
// (carets, count) measure. Returns false if the measure ever fails to drop.
bool run_phase(Element const& g, TreePair& p, bool attracting) {
  int const d = p.params.d;
  while (true) {
    auto fakes = fake_components(p, attracting);
    if (fakes.empty()) return true;
    std::pair<long, std::size_t> measure{fake_caret_total(fakes, d),
                                         fakes.size()};
    // Deterministic pick: least component root.
    std::size_t best = 0;
    for (std::size_t i = 1; i < fakes.size(); ++i)
      if (fakes[i].comp.root < fakes[best].comp.root) best = i;
    p = roll(g, p, fakes[best].chain, fakes[best].comp.relative_leaves,
             attracting ? RollDirection::Forward : RollDirection::Backward);
    auto after = fake_components(p, attracting);
    std::pair<long, std::size_t> measure2{fake_caret_total(after, d),
                                          after.size()};
    if (measure2 >= measure) return false;
  }
}

std::optional<TreePair> attempt(Element const& g, TreePair p,
                                bool attracting_first) {
  for (int round = 0; round < 64; ++round) {
    if (!run_phase(g, p, attracting_first)) return std::nullopt;
    if (!run_phase(g, p, !attracting_first)) return std::nullopt;
    if (is_revealing(p)) return p;
  }
  return std::nullopt;
}

}  // namespace

TreePair make_revealing_from(Element const& g, TreePair p) {
  require(canonicalize(p) == g, "make_revealing: pair does not induce g");
  if (is_revealing(p)) return p;
  for (bool attracting_first : {true, false}) {
    auto r = attempt(g, p, attracting_first);
    if (r && is_revealing(*r) && canonicalize(*r) == g) return *r;
  }
  throw internal_error(
      "make_revealing: rolling terminated without a revealing pair");
}

TreePair make_revealing(Element const& g) {
  return make_revealing_from(g, g.pair());
}

Element embed_in_ball(TreeParams params, Address const& at,
                      Element const& inner) {
  require(!at.is_root() && at.valid_for(params), "embed: bad ball address");
  require(inner.params().d == params.d && inner.params().k == params.d,
          "embed: inner element must live on T_{d,d}");
  CompleteTree host =
      tree_spanned_by(params, {{at}, CompleteTree::minimal(params).leaves});
  std::vector<Address> leaves, image;
  for (auto const& leaf : host.leaves) {
    if (leaf == at) {
      for (std::size_t i = 0; i < inner.pair().domain.leaves.size(); ++i) {
        leaves.push_back(at.concat(inner.pair().domain.leaves[i]));
        image.push_back(at.concat(inner.pair().image[i]));
      }
    } else {
      leaves.push_back(leaf);
      image.push_back(leaf);
    }
  }
  std::vector<std::size_t> order(leaves.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return leaves[a] < leaves[b]; });
  std::vector<Address> ls, im;
  for (std::size_t i : order) {
    ls.push_back(leaves[i]);
    im.push_back(image[i]);
  }
  return Element::from_pair(
      TreePair{params, CompleteTree{params, std::move(ls)}, std::move(im)});
}

std::string serialize(TreePair const& p) {
  std::string out = "aaut v1\n";
  out += "d " + std::to_string(p.params.d) + " k " + std::to_string(p.params.k) +
         "\n";
  out += "pair\n";
  for (std::size_t i = 0; i < p.domain.leaves.size(); ++i)
    out += p.domain.leaves[i].to_string() + " -> " + p.image[i].to_string() +
           "\n";
  return out;
}

std::string serialize(Element const& e) { return serialize(e.pair()); }

}  // namespace aaut
