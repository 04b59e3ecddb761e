#include "cayley/tree.hpp"

#include <sstream>
#include <stdexcept>

namespace cayley {

TreeShape::TreeShape(std::uint64_t branching, int depth) : d_(branching), n_(depth), total_(0) {
  if (d_ < 1) throw std::invalid_argument("tree shape: branching ratio must be >= 1");
  if (n_ < 1) throw std::invalid_argument("tree shape: depth must be >= 1");
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  sizes_.reserve(static_cast<std::size_t>(n_) + 1);
  sizes_.push_back(1);
  for (int i = 1; i <= n_; ++i) {
    const std::uint64_t prev = sizes_.back();
    if (prev > kMax / d_) {
      std::ostringstream os;
      os << "tree shape: d=" << d_ << ", n=" << n_ << " overflows a 64-bit branch count";
      throw std::invalid_argument(os.str());
    }
    const std::uint64_t size = prev * d_;
    if (total_ > kMax - size) {
      throw std::invalid_argument("tree shape: total branch count overflows 64 bits");
    }
    total_ += size;
    sizes_.push_back(size);
  }
}

void validate_walk(const Walk& walk, const TreeShape& shape) {
  if (walk.steps.size() != static_cast<std::size_t>(shape.depth())) {
    throw std::invalid_argument("walk: length does not match tree depth");
  }
  std::uint64_t parent = 0;
  for (std::size_t i = 0; i < walk.steps.size(); ++i) {
    const std::uint64_t j = walk.steps[i];
    const std::uint64_t first = parent * shape.branching();
    if (j < first || j - first >= shape.branching()) {
      std::ostringstream os;
      os << "walk: step " << i + 1 << " index " << j << " is not a child of " << parent;
      throw std::invalid_argument(os.str());
    }
    parent = j;
  }
}

Walk walk_from_leaf(std::uint64_t leaf, const TreeShape& shape) {
  if (leaf >= shape.generation_size(shape.depth())) {
    throw std::out_of_range("walk_from_leaf: leaf index out of range");
  }
  Walk walk;
  walk.steps.resize(static_cast<std::size_t>(shape.depth()));
  for (int i = shape.depth(); i >= 1; --i) {
    walk.steps[static_cast<std::size_t>(i) - 1] = leaf;
    leaf /= shape.branching();
  }
  return walk;
}

}  // namespace cayley
