#ifndef AAUT_STRAND_HPP
#define AAUT_STRAND_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "aaut/element.hpp"
#include "aaut/random.hpp"

namespace aaut {

enum class VertexKind { Split, Merge };

// A directed edge with a cutting-class representative value and its rotation
// slots: out_slot orders it among its split origin's d outgoing edges,
// in_slot among its merge target's d incoming ones (0 when the endpoint is
// not of the rotating kind).
struct DiagramEdge {
  int from = 0;
  int to = 0;
  int out_slot = 0;
  int in_slot = 0;
  long long gamma = 0;
  bool operator==(DiagramEdge const&) const = default;
};

// Closed abstract strand diagram of degree d: every vertex is a split with d
// outgoing edges or a merge with d incoming ones, plus vertexless free loops,
// a rotation system, and an integer cutting-class representative per edge.
struct StrandDiagram {
  int degree = 2;      // d
  int root_arity = 2;  // ambient k, used by admissibility checks
  std::vector<VertexKind> kinds;
  std::vector<DiagramEdge> edges;
  std::vector<long long> free_loops;  // one cycle value per loop

  std::size_t vertex_count() const { return kinds.size(); }
  std::vector<int> out_edges(int v) const;  // edge ids by out_slot
  std::vector<int> in_edges(int v) const;   // edge ids by in_slot
  void validate() const;
};

enum class LoopKind { SplitLoop, MergeLoop, FreeLoop };

struct DiagramLoop {
  LoopKind kind = LoopKind::FreeLoop;
  std::size_t length = 0;      // vertex count, 0 for free loops
  long long class_value = 0;   // total gamma along the loop
  std::vector<int> vertices;   // in cyclic order, least vertex first
};

struct DiagramIso {
  std::vector<int> vertex_map;     // a-vertex -> b-vertex
  std::vector<int> free_loop_map;  // a-loop index -> b-loop index
};

struct DynamicsSummary {
  // (length, period) multisets, sorted
  std::vector<std::pair<std::size_t, long long>> attractors;
  std::vector<std::pair<std::size_t, long long>> repellers;
  int stable_ball_residue = 0;  // mod d-1
  std::size_t component_count = 0;
  bool operator==(DynamicsSummary const&) const = default;
};

// Basic BM-diagram of a tree pair, with the shared-tree hourglass already
// Type-II-reduced and the root edge's unit weight pushed across it.
StrandDiagram basic_diagram(TreePair const& p);

// Belk-Matucci reduced form: Types I, II and III until none applies.
StrandDiagram reduce(StrandDiagram dgm);
// Same, resolving the choice of applicable reduction by a seeded shuffle.
// Exercises order-independence.
StrandDiagram reduce_randomized(StrandDiagram dgm, Rng& rng);
// *-reduced form; the order II -> I* -> III is normative.
StrandDiagram star_reduce(StrandDiagram dgm);

bool has_type1(StrandDiagram const& d);
bool has_type1star(StrandDiagram const& d);
bool has_type2(StrandDiagram const& d);
bool has_type3(StrandDiagram const& d);

std::optional<DiagramIso> iso(StrandDiagram const& a, StrandDiagram const& b,
                              bool respect_rotation);

// Is there a representative that is non-negative, positive on directed
// cycles, with total value congruent to k mod d-1?
bool is_admissible(StrandDiagram const& d);

// Rewrite gamma into the normal form used for reconstruction: per directed
// loop one nonzero edge; zero on split inputs and merge outputs off loops;
// everything non-negative with total at least k.
StrandDiagram admissible_representative(StrandDiagram dgm);

TreePair diagram_to_revealing_pair(StrandDiagram const& dgm,
                                   TreeParams const& params);

std::vector<DiagramLoop> loops(StrandDiagram const& dgm);

DynamicsSummary dynamics_from_diagram(StrandDiagram const& dgm);

// Recognizes the translation-diagram shape: one split loop and one merge
// loop of equal length n, all d-1 spare outgoing edges of the i-th split
// ending at the i-th merge, and the cutting class of a unit translation.
std::optional<std::size_t> is_autT_translation_diagram(StrandDiagram const& dgm);

}  // namespace aaut

#endif
