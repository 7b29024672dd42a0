#include "aaut/conjugacy.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace aaut {

using nlohmann::json;

std::string to_string(Arena a) { return a == Arena::V ? "V" : "AAut"; }

namespace {

json iso_json(DiagramIso const& iso) {
  json j;
  j["vertex_map"] = iso.vertex_map;
  j["free_loop_map"] = iso.free_loop_map;
  return j;
}

json bot_json(BotInvariant const& b) {
  json labels = json::array();
  for (auto l : b.label_set) labels.push_back(l);
  json residues = json::object();
  for (auto const& [label, r] : b.residues)
    residues[std::to_string(label)] = r;
  return json{{"labels", labels}, {"residues", residues}};
}

}  // namespace

Verdict conjugate_in_V(Element const& g, Element const& h) {
  require(g.params() == h.params(), "conjugate_in_V: parameter mismatch");
  StrandDiagram dg = reduce(basic_diagram(g.pair()));
  StrandDiagram dh = reduce(basic_diagram(h.pair()));
  Verdict v;
  v.arena = Arena::V;
  if (auto m = iso(dg, dh, true)) {
    v.conjugate = true;
    v.evidence = json{{"kind", "diagram-iso"}, {"mapping", iso_json(*m)}};
    return v;
  }
  v.conjugate = false;
  if (iso(dg, dh, false))
    v.evidence = json{{"kind", "rotation-mismatch"}};
  else
    v.evidence = json{{"kind", "diagram-not-isomorphic"}};
  return v;
}

Verdict conjugate_hyperbolic(Element const& g, Element const& h) {
  require(g.params() == h.params(), "conjugate_hyperbolic: parameter mismatch");
  require(is_hyperbolic(g) && is_hyperbolic(h),
          "conjugate_hyperbolic: inputs must be hyperbolic");
  StrandDiagram dg = star_reduce(basic_diagram(make_revealing(g)));
  StrandDiagram dh = star_reduce(basic_diagram(make_revealing(h)));
  Verdict v;
  v.arena = Arena::AAut;
  if (auto m = iso(dg, dh, false)) {
    v.conjugate = true;
    v.evidence =
        json{{"kind", "diagram-iso-up-to-rotation"}, {"mapping", iso_json(*m)}};
  } else {
    v.conjugate = false;
    v.evidence = json{{"kind", "hyperbolic-diagram-mismatch"}};
  }
  return v;
}

Verdict conjugate(Element const& g, Element const& h) {
  require(g.params() == h.params(), "conjugate: parameter mismatch");
  int const d = g.params().d;
  auto [ge, gh] = eh_decompose(g);
  auto [he, hh] = eh_decompose(h);
  Verdict v;
  v.arena = Arena::AAut;

  BotInvariant bg = bot_invariant(orbital_type(ge), d);
  BotInvariant bh = bot_invariant(orbital_type(he), d);
  if (bg.label_set != bh.label_set) {
    v.conjugate = false;
    v.evidence = json{{"kind", "elliptic-label-set-mismatch"},
                      {"left", bot_json(bg)},
                      {"right", bot_json(bh)}};
    return v;
  }
  if (bg.residues != bh.residues) {
    v.conjugate = false;
    v.evidence = json{{"kind", "elliptic-residue-mismatch"},
                      {"left", bot_json(bg)},
                      {"right", bot_json(bh)}};
    return v;
  }
  json hyperbolic_evidence;
  if (gh.is_identity() != hh.is_identity()) {
    v.conjugate = false;
    v.evidence = json{{"kind", "hyperbolic-diagram-mismatch"},
                      {"detail", "exactly one hyperbolic part is trivial"}};
    return v;
  }
  if (gh.is_identity()) {
    hyperbolic_evidence = json{{"kind", "both-trivial"}};
  } else {
    Verdict hv = conjugate_hyperbolic(gh, hh);
    if (!hv.conjugate) {
      v.conjugate = false;
      v.evidence = hv.evidence;
      return v;
    }
    hyperbolic_evidence = hv.evidence;
  }
  bool sg = support_is_full(g);
  bool sh = support_is_full(h);
  if (sg != sh) {
    v.conjugate = false;
    v.evidence = json{{"kind", "support-mismatch"},
                      {"left_full", sg},
                      {"right_full", sh}};
    return v;
  }
  v.conjugate = true;
  v.evidence = json{{"kind", "eh-invariants"},
                    {"elliptic", bot_json(bg)},
                    {"hyperbolic", hyperbolic_evidence},
                    {"support_full", sg}};
  return v;
}

bool has_open_conjugacy_class(Element const& g) {
  return is_hyperbolic(g) && support_is_full(g);
}

namespace {

std::vector<CompleteTree> trees_up_to(TreeParams params, int max_carets) {
  std::vector<CompleteTree> out{CompleteTree::minimal(params)};
  std::set<std::vector<Address>> seen{out.front().leaves};
  std::size_t frontier_begin = 0;
  for (int c = 2; c <= max_carets; ++c) {
    std::size_t frontier_end = out.size();
    for (std::size_t t = frontier_begin; t < frontier_end; ++t) {
      std::vector<Address> base = out[t].leaves;
      for (std::size_t i = 0; i < base.size(); ++i) {
        std::vector<Address> next;
        next.reserve(base.size() + static_cast<std::size_t>(params.d) - 1);
        for (std::size_t j = 0; j < base.size(); ++j) {
          if (j == i)
            for (int ch = 0; ch < params.d; ++ch)
              next.push_back(base[j].child(ch));
          else
            next.push_back(base[j]);
        }
        std::sort(next.begin(), next.end());
        if (seen.insert(next).second)
          out.push_back(CompleteTree{params, next});
      }
    }
    frontier_begin = frontier_end;
  }
  return out;
}

}  // namespace

namespace {

std::vector<Element> enumerate_uncached(TreeParams params, int max_carets);

}  // namespace

std::vector<Element> enumerate_canonical_elements(TreeParams params,
                                                  int max_carets) {
  require(max_carets >= 1, "enumerate: max_carets must be at least 1");
  // The oracle re-runs with the same bound constantly; cache the corpora.
  static std::map<std::tuple<int, int, int>, std::vector<Element>> cache;
  static std::mutex lock;
  std::scoped_lock guard(lock);
  auto key = std::make_tuple(params.d, params.k, max_carets);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, enumerate_uncached(params, max_carets)).first;
  return it->second;
}

namespace {

std::vector<Element> enumerate_uncached(TreeParams params, int max_carets) {
  std::vector<CompleteTree> trees = trees_up_to(params, max_carets);
  std::map<std::size_t, std::vector<CompleteTree const*>> by_leaves;
  for (auto const& t : trees) by_leaves[t.leaf_count()].push_back(&t);

  std::vector<std::pair<std::string, Element>> keyed;
  std::set<std::string> seen;
  for (auto const& [leaves, group] : by_leaves) {
    std::vector<std::size_t> perm(leaves);
    for (auto const* dom : group) {
      for (auto const* rng : group) {
        for (std::size_t i = 0; i < leaves; ++i) perm[i] = i;
        do {
          std::vector<Address> image(leaves);
          for (std::size_t i = 0; i < leaves; ++i)
            image[i] = rng->leaves[perm[i]];
          Element e = Element::from_pair(TreePair{params, *dom, image});
          // keep only elements whose canonical domain stayed within bounds,
          // deduplicated by canonical form
          if (e.pair().domain.caret_count() > max_carets) continue;
          std::string key = serialize(e);
          if (seen.insert(key).second) keyed.emplace_back(std::move(key), e);
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  }
  std::sort(keyed.begin(), keyed.end(), [](auto const& a, auto const& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<Element> out;
  out.reserve(keyed.size());
  for (auto& [key, e] : keyed) out.push_back(std::move(e));
  return out;
}

}  // namespace

std::optional<Witness> brute_force_conjugator(Element const& g,
                                              Element const& h,
                                              int max_carets) {
  require(g.params() == h.params(), "oracle: parameter mismatch");
  std::vector<Element> candidates =
      enumerate_canonical_elements(g.params(), max_carets);
  std::atomic<long> best{static_cast<long>(candidates.size())};
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 64)
#endif
  for (long i = 0; i < static_cast<long>(candidates.size()); ++i) {
    if (i >= best.load(std::memory_order_relaxed)) continue;
    Element const& a = candidates[static_cast<std::size_t>(i)];
    if (compose(a, compose(g, inverse(a))) == h) {
      long cur = best.load(std::memory_order_relaxed);
      while (i < cur &&
             !best.compare_exchange_weak(cur, i, std::memory_order_relaxed)) {
      }
    }
  }
  long idx = best.load();
  if (idx >= static_cast<long>(candidates.size())) return std::nullopt;
  Witness w{candidates[static_cast<std::size_t>(idx)]};
  ensure(compose(w.conjugator, compose(g, inverse(w.conjugator))) == h,
         "oracle: witness failed re-verification");
  return w;
}

}  // namespace aaut
