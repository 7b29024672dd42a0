#ifndef AAUT_DYNAMICS_HPP
#define AAUT_DYNAMICS_HPP

#include <string>
#include <vector>

#include "aaut/element.hpp"

namespace aaut {

// An eventually periodic boundary point prefix . cycle^inf, kept in normal
// form: the cycle is primitive and the prefix is shortest possible. Equality
// of points is equality of normal forms.
class BoundaryPoint {
 public:
  BoundaryPoint(Address prefix, Address cycle, TreeParams const& params);
  // Text form "prefix/(cycle)".
  static BoundaryPoint parse(std::string const& text, TreeParams const& params);

  Address const& prefix() const { return prefix_; }
  Address const& cycle() const { return cycle_; }
  int digit(std::size_t i) const;          // i-th letter of the infinite word
  Address word(std::size_t length) const;  // truncation

  std::string to_string() const;

  friend bool operator==(BoundaryPoint const& a, BoundaryPoint const& b) {
    return a.prefix_ == b.prefix_ && a.cycle_ == b.cycle_;
  }

 private:
  Address prefix_;
  Address cycle_;
};

enum class PointKind { Attracting, Repelling, Stable, Wandering };

std::string to_string(PointKind k);

struct PointClass {
  PointKind kind = PointKind::Wandering;
  std::size_t period = 0;  // >= 1 except for wandering
  std::size_t length = 0;  // attracting/repelling depth gain per return
  bool operator==(PointClass const&) const = default;
};

struct FixedPointRecord {
  BoundaryPoint point;
  std::size_t period;
  std::size_t length;
};

struct DynamicsReport {
  std::vector<FixedPointRecord> attractors;
  std::vector<FixedPointRecord> repellers;
  ClopenSet stable_region;
  ClopenSet wandering_region_closure;
  bool support_full = false;
};

// Exact image of a boundary point (eventually periodic in, same out).
BoundaryPoint act_point(Element const& g, BoundaryPoint const& p);

PointClass classify_point(Element const& g, BoundaryPoint const& p);

DynamicsReport dynamics_report(Element const& g);

bool is_elliptic(Element const& g);
bool is_hyperbolic(Element const& g);
bool support_is_full(Element const& g);

// Unique factorization g = g_e * g_h with disjoint supports; g_e elliptic,
// g_h hyperbolic or the identity.
std::pair<Element, Element> eh_decompose(Element const& g);

}  // namespace aaut

#endif
