#include "aaut/tree.hpp"

#include <algorithm>
#include <map>

namespace aaut {

namespace {

char digit_to_char(int v) {
  return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10));
}

int char_to_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 10;
  return -1;
}

}  // namespace

Address Address::parse(std::string const& text) {
  std::string raw;
  raw.reserve(text.size());
  for (char c : text) {
    int v = char_to_digit(c);
    if (v < 0)
      throw format_error("digit out of range: '" + std::string(1, c) + "'");
    raw.push_back(static_cast<char>(v));
  }
  return Address(raw);
}

std::string Address::to_string() const {
  std::string out;
  out.reserve(digits_.size());
  for (char c : digits_) out.push_back(digit_to_char(static_cast<unsigned char>(c)));
  return out;
}

bool Address::valid_for(TreeParams const& p) const {
  for (std::size_t i = 0; i < digits_.size(); ++i) {
    int bound = (i == 0) ? p.k : p.d;
    if (digit(i) >= bound) return false;
  }
  return true;
}

bool Address::valid_relative(int d) const {
  for (std::size_t i = 0; i < digits_.size(); ++i)
    if (digit(i) >= d) return false;
  return true;
}

bool is_complete(std::vector<Address> const& leaves, TreeParams const& params) {
  if (leaves.empty()) return false;
  std::set<Address> leafset;
  for (auto const& a : leaves) {
    if (a.is_root() || !a.valid_for(params)) return false;
    if (!leafset.insert(a).second) return false;  // duplicate
  }
  // Antichain + completeness: collect interior vertices, then check that
  // every interior vertex has all of its children present.
  std::set<Address> interior;
  interior.insert(Address::root());
  for (auto const& a : leaves) {
    Address p = a;
    while (!p.is_root()) {
      p = p.parent();
      if (leafset.count(p)) return false;  // a leaf above another leaf
      interior.insert(p);
    }
  }
  for (auto const& v : interior) {
    int arity = v.is_root() ? params.k : params.d;
    for (int i = 0; i < arity; ++i) {
      Address c = v.child(i);
      if (!interior.count(c) && !leafset.count(c)) return false;
    }
  }
  return true;
}

CompleteTree CompleteTree::minimal(TreeParams p) {
  std::vector<Address> ls;
  for (int i = 0; i < p.k; ++i) ls.push_back(Address::root().child(i));
  return CompleteTree{p, std::move(ls)};
}

CompleteTree CompleteTree::from_leaves(TreeParams p, std::vector<Address> ls) {
  std::sort(ls.begin(), ls.end());
  if (!is_complete(ls, p))
    throw format_error("leaf set is not a complete antichain for T_{" +
                       std::to_string(p.d) + "," + std::to_string(p.k) + "}");
  return CompleteTree{p, std::move(ls)};
}

bool CompleteTree::has_leaf(Address const& a) const {
  return std::binary_search(leaves.begin(), leaves.end(), a);
}

bool CompleteTree::is_interior(Address const& a) const {
  if (a.is_root()) return true;
  // In a complete tree every vertex is at/below a leaf or interior.
  return !leaf_at_or_above(a).has_value();
}

std::optional<std::size_t> CompleteTree::leaf_at_or_above(
    Address const& a) const {
  Address p = a;
  while (true) {
    auto it = std::lower_bound(leaves.begin(), leaves.end(), p);
    if (it != leaves.end() && *it == p)
      return static_cast<std::size_t>(it - leaves.begin());
    if (p.is_root()) return std::nullopt;
    p = p.parent();
  }
}

CompleteTree tree_spanned_by(TreeParams params,
                             std::vector<std::vector<Address>> const& groups) {
  std::set<Address> interior;
  interior.insert(Address::root());
  for (auto const& g : groups)
    for (auto const& a : g) {
      Address p = a;
      while (!p.is_root()) {
        p = p.parent();
        interior.insert(p);
      }
    }
  std::vector<Address> leaves;
  for (auto const& v : interior) {
    int arity = v.is_root() ? params.k : params.d;
    for (int i = 0; i < arity; ++i) {
      Address c = v.child(i);
      if (!interior.count(c)) leaves.push_back(c);
    }
  }
  std::sort(leaves.begin(), leaves.end());
  return CompleteTree{params, std::move(leaves)};
}

CompleteTree union_trees(CompleteTree const& a, CompleteTree const& b) {
  require(a.params == b.params, "union: tree parameter mismatch");
  // A vertex is a leaf of the union iff it is a leaf of one tree and not an
  // interior vertex of the other.
  std::vector<Address> leaves;
  leaves.reserve(a.leaves.size() + b.leaves.size());
  for (auto const& l : a.leaves)
    if (!b.is_interior(l)) leaves.push_back(l);
  for (auto const& l : b.leaves)
    if (!a.is_interior(l)) leaves.push_back(l);
  std::sort(leaves.begin(), leaves.end());
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  return CompleteTree{a.params, std::move(leaves)};
}

std::vector<TreeComponent> subtract(CompleteTree const& a,
                                    CompleteTree const& b) {
  require(a.params == b.params, "subtract: tree parameter mismatch");
  // Component roots are the leaves of b that are interior vertices of a.
  std::vector<TreeComponent> out;
  for (auto const& r : b.leaves) {
    if (!a.is_interior(r)) continue;
    TreeComponent comp;
    comp.root = r;
    for (auto const& leaf : a.leaves)
      if (r.is_prefix_of(leaf)) comp.relative_leaves.push_back(r.suffix_of(leaf));
    std::sort(comp.relative_leaves.begin(), comp.relative_leaves.end());
    out.push_back(std::move(comp));
  }
  return out;
}

ClopenSet ClopenSet::whole_boundary(TreeParams p) {
  std::vector<Address> balls;
  for (int i = 0; i < p.k; ++i) balls.push_back(Address::root().child(i));
  return ClopenSet{p, std::move(balls)};
}

ClopenSet ClopenSet::from_balls(TreeParams p, std::vector<Address> balls) {
  std::set<Address> s;
  for (auto const& a : balls) {
    require(!a.is_root() && a.valid_for(p), "clopen set: bad ball address");
    s.insert(a);
  }
  // Antichain check.
  for (auto const& a : s) {
    Address q = a;
    while (!q.is_root()) {
      q = q.parent();
      require(!s.count(q), "clopen set: balls are not an antichain");
    }
  }
  // Normalize: contract full non-root sibling groups until none remain.
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Address, int> full;
    for (auto const& a : s)
      if (a.depth() >= 2) full[a.parent()]++;
    for (auto const& [parent, count] : full) {
      if (count == p.d) {
        for (int i = 0; i < p.d; ++i) s.erase(parent.child(i));
        s.insert(parent);
        changed = true;
        break;
      }
    }
  }
  return ClopenSet{p, std::vector<Address>(s.begin(), s.end())};
}

bool ClopenSet::is_full() const {
  if (static_cast<int>(balls.size()) != params.k) return false;
  for (int i = 0; i < params.k; ++i)
    if (balls[static_cast<std::size_t>(i)] != Address::root().child(i))
      return false;
  return true;
}

int ball_count_residue(std::vector<Address> const& balls,
                       TreeParams const& params) {
  return static_cast<int>(balls.size() % static_cast<std::size_t>(params.d - 1));
}

BallResidue ball_count_residue(ClopenSet const& s) {
  BallResidue r;
  r.residue = ball_count_residue(s.balls, s.params);
  r.is_empty = s.is_empty();
  r.is_full = s.is_full();
  return r;
}

}  // namespace aaut
