#include "bsvd/block_model.hpp"

#include <limits>

namespace bsvd {

std::string to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::Circular: return "circular";
    case BlockKind::Spherical: return "spherical";
    case BlockKind::Custom: return "custom";
  }
  return "custom";
}

BlockKind block_kind_from_string(const std::string& name) {
  if (name == "circular") return BlockKind::Circular;
  if (name == "spherical") return BlockKind::Spherical;
  if (name == "custom") return BlockKind::Custom;
  throw DomainError("unknown block kind '" + name + "'");
}

std::int64_t lattice_sphere_count(int d, int radius) {
  if (d < 1) throw DomainError("lattice dimension must be >= 1");
  if (radius < 0) return 0;
  // counts[r] = #{k in Z^j : sum |k_i| = r}, built up one coordinate at a time
  std::vector<std::int64_t> counts(radius + 1, 0);
  counts[0] = 1;
  for (int r = 1; r <= radius; ++r) counts[r] = 2;
  for (int j = 2; j <= d; ++j) {
    std::vector<std::int64_t> next(radius + 1, 0);
    for (int r = 0; r <= radius; ++r) {
      std::int64_t acc = counts[r];  // k_j = 0
      for (int a = 1; a <= r; ++a) acc += 2 * counts[r - a];
      next[r] = acc;
    }
    counts = std::move(next);
  }
  return counts[radius];
}

BlockStructure BlockStructure::circular(int d, int max_level) {
  if (d < 1) throw DomainError("circular structure needs d >= 1");
  if (max_level < 1) throw RangeError("max_level must be >= 1");
  std::vector<int> sizes;
  sizes.reserve(max_level);
  for (int l = 1; l <= max_level; ++l) {
    const std::int64_t n = lattice_sphere_count(d, l - 1);
    if (n > std::numeric_limits<int>::max()) throw RangeError("circular block size overflows int");
    sizes.push_back(static_cast<int>(n));
  }
  return BlockStructure(BlockKind::Circular, d, std::move(sizes));
}

BlockStructure BlockStructure::spherical(int max_level) {
  if (max_level < 1) throw RangeError("max_level must be >= 1");
  std::vector<int> sizes;
  sizes.reserve(max_level);
  for (int l = 1; l <= max_level; ++l) sizes.push_back(2 * l - 1);
  return BlockStructure(BlockKind::Spherical, 2, std::move(sizes));
}

BlockStructure BlockStructure::custom(std::vector<int> sizes, int d) {
  if (sizes.empty()) throw RangeError("custom structure needs at least one level");
  for (int s : sizes)
    if (s < 1) throw DomainError("custom block sizes must be positive");
  if (d < 1) throw DomainError("custom structure needs d >= 1");
  return BlockStructure(BlockKind::Custom, d, std::move(sizes));
}

int BlockStructure::block_size(int level) const {
  if (level < 1 || level > max_level())
    throw RangeError("block level " + std::to_string(level) + " outside 1.." +
                     std::to_string(max_level()));
  return sizes_[level - 1];
}

std::int64_t BlockStructure::total_size(int upto) const {
  const int last = upto < 0 ? max_level() : std::min(upto, max_level());
  std::int64_t acc = 0;
  for (int l = 1; l <= last; ++l) acc += sizes_[l - 1];
  return acc;
}

BlockStructure BlockStructure::with_max_level(int max_level) const {
  switch (kind_) {
    case BlockKind::Circular: return circular(d_, max_level);
    case BlockKind::Spherical: return spherical(max_level);
    case BlockKind::Custom:
      if (max_level < 1 || max_level > this->max_level())
        throw RangeError("custom structure cannot grow beyond its stored levels");
      return custom(std::vector<int>(sizes_.begin(), sizes_.begin() + max_level), d_);
  }
  return *this;
}

}  // namespace bsvd
