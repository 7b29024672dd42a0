#include "aaut/random.hpp"

#include <algorithm>

namespace aaut {

CompleteTree random_complete_tree(TreeParams params, std::uint64_t carets,
                                  Rng& rng) {
  std::vector<Address> leaves = CompleteTree::minimal(params).leaves;
  for (std::uint64_t step = 0; step < carets; ++step) {
    std::size_t i = rng.below(leaves.size());
    Address v = leaves[i];
    leaves.erase(leaves.begin() + static_cast<long>(i));
    for (int c = 0; c < params.d; ++c) leaves.push_back(v.child(c));
  }
  std::sort(leaves.begin(), leaves.end());
  return CompleteTree{params, std::move(leaves)};
}

Element random_element(TreeParams params, std::uint64_t carets, Rng& rng) {
  CompleteTree domain = random_complete_tree(params, carets, rng);
  CompleteTree range = random_complete_tree(params, carets, rng);
  std::vector<std::size_t> perm(domain.leaf_count());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);
  std::vector<Address> image;
  image.reserve(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i)
    image.push_back(range.leaves[perm[i]]);
  return Element::from_pair(TreePair{params, std::move(domain), std::move(image)});
}

}  // namespace aaut
