#ifndef AAUT_ERROR_HPP
#define AAUT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace aaut {

// Malformed input: bad digits, non-antichains, unparseable files. CLI exit 2.
class format_error : public std::runtime_error {
 public:
  explicit format_error(std::string const& msg) : std::runtime_error(msg) {}
};

// Precondition violations on library calls (parameter mismatch, wrong input
// class). CLI exit 2.
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(std::string const& msg)
      : std::invalid_argument(msg) {}
};

// A post-condition or internal invariant tripped. Must never fire. CLI exit 3.
class internal_error : public std::logic_error {
 public:
  explicit internal_error(std::string const& msg) : std::logic_error(msg) {}
};

// act() was asked about an address that is a proper prefix of a domain leaf.
class needs_refinement : public std::runtime_error {
 public:
  explicit needs_refinement(std::string const& ambiguous_prefix)
      : std::runtime_error("address \"" + ambiguous_prefix +
                           "\" is above a domain leaf; refine first"),
        prefix(ambiguous_prefix) {}
  std::string prefix;
};

inline void require(bool cond, std::string const& msg) {
  if (!cond) throw precondition_error(msg);
}

inline void ensure(bool cond, std::string const& msg) {
  if (!cond) throw internal_error(msg);
}

}  // namespace aaut

#endif
