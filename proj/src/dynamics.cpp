#include "aaut/dynamics.hpp"

#include <algorithm>

namespace aaut {

namespace {

// Smallest period of the digit block (primitive root length).
std::size_t primitive_root(std::string const& s) {
  for (std::size_t len = 1; len < s.size(); ++len) {
    if (s.size() % len != 0) continue;
    bool ok = true;
    for (std::size_t i = len; i < s.size() && ok; ++i)
      ok = s[i] == s[i - len];
    if (ok) return len;
  }
  return s.size();
}

}  // namespace

BoundaryPoint::BoundaryPoint(Address prefix, Address cycle,
                             TreeParams const& params) {
  require(!cycle.is_root(), "boundary point: cycle must be nonempty");
  require(cycle.valid_relative(params.d), "boundary point: bad cycle digits");
  std::string p = prefix.digits();
  std::string c = cycle.digits();
  c.resize(primitive_root(c));
  // Absorb a prefix tail that repeats the cycle's end: w.z (z...y)^inf with
  // z = last cycle letter equals w (z y... )^inf rotated.
  while (!p.empty() && p.back() == c.back()) {
    p.pop_back();
    c.insert(c.begin(), c.back());
    c.pop_back();
  }
  prefix_ = Address(p);
  cycle_ = Address(c);
  require(prefix_.valid_for(params), "boundary point: bad prefix digits");
  if (prefix_.is_root())
    require(cycle_.digit(0) < params.k,
            "boundary point: first letter exceeds root arity");
}

int BoundaryPoint::digit(std::size_t i) const {
  if (i < prefix_.depth()) return prefix_.digit(i);
  return cycle_.digit((i - prefix_.depth()) % cycle_.depth());
}

Address BoundaryPoint::word(std::size_t length) const {
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i)
    out.push_back(static_cast<char>(digit(i)));
  return Address(out);
}

std::string BoundaryPoint::to_string() const {
  return prefix_.to_string() + "/(" + cycle_.to_string() + ")";
}

BoundaryPoint BoundaryPoint::parse(std::string const& text,
                                   TreeParams const& params) {
  auto slash = text.find('/');
  if (slash == std::string::npos || slash + 2 >= text.size() ||
      text[slash + 1] != '(' || text.back() != ')')
    throw format_error("boundary point: expected \"prefix/(cycle)\"");
  Address prefix = Address::parse(text.substr(0, slash));
  Address cycle =
      Address::parse(text.substr(slash + 2, text.size() - slash - 3));
  return BoundaryPoint(prefix, cycle, params);
}

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::Attracting: return "attracting";
    case PointKind::Repelling: return "repelling";
    case PointKind::Stable: return "stable";
    case PointKind::Wandering: return "wandering";
  }
  return "?";
}

BoundaryPoint act_point(Element const& g, BoundaryPoint const& p) {
  TreePair const& pr = g.pair();
  Address cur = Address::root();
  std::size_t consumed = 0;
  while (!pr.domain.has_leaf(cur)) {
    cur = cur.child(p.digit(consumed));
    ++consumed;
    ensure(consumed <= pr.domain.leaves.back().depth() + 1,
           "act_point: walked past every leaf");
  }
  Address img = pr.apply(cur);
  // Tail of the word after `consumed` letters, still eventually periodic.
  std::string tail_prefix;
  std::string cyc = p.cycle().digits();
  if (consumed < p.prefix().depth()) {
    tail_prefix = p.prefix().digits().substr(consumed);
  } else {
    std::size_t r = (consumed - p.prefix().depth()) % cyc.size();
    std::rotate(cyc.begin(), cyc.begin() + static_cast<long>(r), cyc.end());
  }
  return BoundaryPoint(img.concat(Address(tail_prefix)), Address(cyc),
                       g.params());
}

namespace {

struct ChainIndex {
  TreePair pair;
  std::vector<MaximalChain> cs;
  // chain index + position for every leaf of T1 in the chain
  MaximalChain const* chain_of_domain_leaf(Address const& leaf) const {
    for (auto const& c : cs) {
      std::size_t upto = c.kind == ChainKind::Periodic ? c.vertices.size()
                                                       : c.vertices.size() - 1;
      for (std::size_t i = 0; i < upto; ++i)
        if (c.vertices[i] == leaf) return &c;
    }
    return nullptr;
  }
};

ChainIndex revealing_chains(Element const& g) {
  ChainIndex idx;
  idx.pair = make_revealing(g);
  idx.cs = chains(idx.pair);
  return idx;
}

}  // namespace

PointClass classify_point(Element const& g, BoundaryPoint const& p) {
  ChainIndex idx = revealing_chains(g);
  // Locate the domain leaf whose ball contains p.
  Address cur = Address::root();
  std::size_t consumed = 0;
  while (!idx.pair.domain.has_leaf(cur)) {
    cur = cur.child(p.digit(consumed));
    ++consumed;
  }
  MaximalChain const* c = idx.chain_of_domain_leaf(cur);
  ensure(c != nullptr, "classify_point: leaf not on any chain");
  switch (c->kind) {
    case ChainKind::Periodic:
      return PointClass{PointKind::Stable, c->cycle_length(), 0};
    case ChainKind::Wandering:
      return PointClass{PointKind::Wandering, 0, 0};
    case ChainKind::Attractor: {
      BoundaryPoint fixed(cur, *c->spine, g.params());
      if (fixed == p)
        return PointClass{PointKind::Attracting, c->period(),
                          c->spine->depth()};
      return PointClass{PointKind::Wandering, 0, 0};
    }
    case ChainKind::Repeller: {
      BoundaryPoint fixed(cur, *c->spine, g.params());
      if (fixed == p)
        return PointClass{PointKind::Repelling, c->period(),
                          c->spine->depth()};
      return PointClass{PointKind::Wandering, 0, 0};
    }
    case ChainKind::Other:
      break;
  }
  throw internal_error("classify_point: revealing pair had an other-chain");
}

DynamicsReport dynamics_report(Element const& g) {
  ChainIndex idx = revealing_chains(g);
  DynamicsReport rep;
  std::vector<Address> stable, wandering;
  bool has_fixed_leaf = false;
  for (auto const& c : idx.cs) {
    switch (c.kind) {
      case ChainKind::Periodic:
        for (auto const& v : c.vertices) stable.push_back(v);
        if (c.cycle_length() == 1) has_fixed_leaf = true;
        break;
      case ChainKind::Attractor:
        rep.attractors.push_back(
            FixedPointRecord{BoundaryPoint(c.front(), *c.spine, g.params()),
                             c.period(), c.spine->depth()});
        for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i)
          wandering.push_back(c.vertices[i]);
        break;
      case ChainKind::Repeller:
        rep.repellers.push_back(
            FixedPointRecord{BoundaryPoint(c.front(), *c.spine, g.params()),
                             c.period(), c.spine->depth()});
        for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i)
          wandering.push_back(c.vertices[i]);
        break;
      case ChainKind::Wandering:
        for (std::size_t i = 0; i + 1 < c.vertices.size(); ++i)
          wandering.push_back(c.vertices[i]);
        break;
      case ChainKind::Other:
        throw internal_error("dynamics_report: non-revealing pair");
    }
  }
  auto point_key = [](FixedPointRecord const& r) {
    return std::make_tuple(r.point.prefix(), r.point.cycle());
  };
  std::sort(rep.attractors.begin(), rep.attractors.end(),
            [&](auto const& a, auto const& b) { return point_key(a) < point_key(b); });
  std::sort(rep.repellers.begin(), rep.repellers.end(),
            [&](auto const& a, auto const& b) { return point_key(a) < point_key(b); });
  rep.stable_region = ClopenSet::from_balls(g.params(), stable);
  rep.wandering_region_closure = ClopenSet::from_balls(g.params(), wandering);
  rep.support_full = !has_fixed_leaf;
  return rep;
}

bool is_elliptic(Element const& g) {
  for (auto const& c : chains(make_revealing(g)))
    if (c.kind != ChainKind::Periodic) return false;
  return true;
}

bool is_hyperbolic(Element const& g) {
  if (g.is_identity()) return false;
  for (auto const& c : chains(make_revealing(g)))
    if (c.kind == ChainKind::Periodic && c.cycle_length() > 1) return false;
  return true;
}

bool support_is_full(Element const& g) {
  if (g.is_identity()) return false;
  for (auto const& c : chains(make_revealing(g)))
    if (c.kind == ChainKind::Periodic && c.cycle_length() == 1) return false;
  return true;
}

std::pair<Element, Element> eh_decompose(Element const& g) {
  TreePair rp = make_revealing(g);
  std::set<Address> periodic;
  for (auto const& c : chains(rp))
    if (c.kind == ChainKind::Periodic)
      periodic.insert(c.vertices.begin(), c.vertices.end());
  std::vector<Address> e_image, h_image;
  e_image.reserve(rp.image.size());
  h_image.reserve(rp.image.size());
  for (std::size_t i = 0; i < rp.domain.leaves.size(); ++i) {
    bool is_per = periodic.count(rp.domain.leaves[i]) > 0;
    e_image.push_back(is_per ? rp.image[i] : rp.domain.leaves[i]);
    h_image.push_back(is_per ? rp.domain.leaves[i] : rp.image[i]);
  }
  Element ge = Element::from_pair(TreePair{rp.params, rp.domain, e_image});
  Element gh = Element::from_pair(TreePair{rp.params, rp.domain, h_image});
  ensure(compose(ge, gh) == g, "eh_decompose: factors do not recompose");
  return {ge, gh};
}

}  // namespace aaut
