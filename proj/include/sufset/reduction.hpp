#pragma once

#include <cstddef>

namespace sufset {

// Fixed-shape pairwise (tree) sum of term(i) for i in [lo, hi). The tree
// depends only on the range, so results are bit-identical no matter how the
// terms were produced or how many threads produced them.
template <typename T, typename Term>
T pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
  constexpr std::size_t kLeaf = 8;
  if (hi - lo <= kLeaf) {
    T acc = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  T left = pairwise_sum<T>(lo, mid, term);
  left += pairwise_sum<T>(mid, hi, term);
  return left;
}

}  // namespace sufset
