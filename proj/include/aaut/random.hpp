#ifndef AAUT_RANDOM_HPP
#define AAUT_RANDOM_HPP

#include <cstdint>

#include "aaut/element.hpp"
#include "aaut/tree.hpp"

namespace aaut {

// SplitMix64. Chosen as the named PRNG for reproducible corpora: the whole
// generator is the three-line mixing function below, so any implementation
// of the same spec produces byte-identical streams for the same seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // Uniform-enough draw in [0, n); n is tiny here, modulo bias is irrelevant
  // and keeps the stream specification trivial.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Grow the minimal tree by `carets` uniform leaf splits.
CompleteTree random_complete_tree(TreeParams params, std::uint64_t carets,
                                  Rng& rng);

// Random domain tree, independent range tree of equal leaf count, uniform
// leaf bijection (Fisher-Yates), then canonicalized.
Element random_element(TreeParams params, std::uint64_t carets, Rng& rng);

}  // namespace aaut

#endif
