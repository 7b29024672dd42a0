#ifndef AAUT_CONJUGACY_HPP
#define AAUT_CONJUGACY_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "aaut/dynamics.hpp"
#include "aaut/element.hpp"
#include "aaut/elliptic.hpp"
#include "aaut/strand.hpp"

namespace aaut {

enum class Arena { V, AAut };

std::string to_string(Arena a);

// Decision plus a checkable certificate: for YES the matched invariants (or
// a witness), for NO the first failing invariant.
struct Verdict {
  bool conjugate = false;
  Arena arena = Arena::AAut;
  nlohmann::json evidence;
};

struct Witness {
  Element conjugator;  // a with a g a^-1 = h, verified on construction
};

// Thm-2.17 route: reduced basic diagrams isomorphic, rotation included.
Verdict conjugate_in_V(Element const& g, Element const& h);

// Thm-5.1 route: *-reduced diagrams of revealing pairs isomorphic up to
// rotation. Preconditions: both hyperbolic.
Verdict conjugate_hyperbolic(Element const& g, Element const& h);

// Full decision: elliptic parts by boundary orbital type, hyperbolic parts by
// diagram, supports both full or both proper.
Verdict conjugate(Element const& g, Element const& h);

bool has_open_conjugacy_class(Element const& g);

// Exhaustive bounded search, ordered shortlex on the serialized form; the
// first witness in that order wins, independent of any internal parallelism.
std::optional<Witness> brute_force_conjugator(Element const& g,
                                              Element const& h,
                                              int max_carets);

// All canonical elements whose domain has at most max_carets carets (the
// root caret counts), shortlex-ordered by serialization.
std::vector<Element> enumerate_canonical_elements(TreeParams params,
                                                  int max_carets);

}  // namespace aaut

#endif
