#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <utility>

namespace fuzzynet {

/// In-place Fisher-Yates shuffle.
template <class T, class Gen>
void fisher_yates(std::span<T> items, Gen& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(items[i - 1], items[pick(gen)]);
  }
}

}  // namespace fuzzynet
