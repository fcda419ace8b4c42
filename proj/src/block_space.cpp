// SPDX-License-Identifier: Apache-2.0
#include "tightembed/block_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "tightembed/spaces.hpp"

namespace tightembed {

BlockSpace::BlockSpace(double outer_s, std::vector<BlockSpec> blocks)
    : s_(outer_s), blocks_(std::move(blocks)) {
  if (!(outer_s >= 1.0))
    throw std::invalid_argument("block space: outer exponent must be >= 1");
  for (const BlockSpec& b : blocks_) {
    if (!(b.p >= 1.0))
      throw std::invalid_argument("block space: block exponent must be >= 1");
    if (b.dim < 0) throw std::invalid_argument("block space: negative block dim");
  }
}

double block_norm(const BlockSpace& space, const BlockVector& v) {
  const double s = space.outer_s();
  double acc = 0.0;
  for (const auto& [j, coords] : v.parts) {
    if (j < 0 || j >= space.block_count())
      throw std::invalid_argument("block norm: unknown block index " +
                                  std::to_string(j));
    if (static_cast<int>(coords.size()) != space.block(j).dim)
      throw std::invalid_argument("block norm: wrong dimension in block " +
                                  std::to_string(j));
    const double part = lp_norm(coords, space.block(j).p);
    if (std::isinf(s))
      acc = std::max(acc, part);
    else if (s == 1.0)
      acc += part;
    else if (s == 2.0)
      acc += part * part;
    else
      acc += std::pow(part, s);
  }
  if (std::isinf(s) || s == 1.0) return acc;
  if (s == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / s);
}

BlockVector block_project(const BlockVector& v, const std::vector<int>& keep) {
  BlockVector out;
  for (int j : keep) {
    auto it = v.parts.find(j);
    if (it != v.parts.end()) out.parts.emplace(j, it->second);
  }
  return out;
}

BlockVector block_scale(const BlockVector& v, double c) {
  BlockVector out = v;
  for (auto& [j, coords] : out.parts)
    for (double& x : coords) x *= c;
  return out;
}

BlockVector block_add(const BlockVector& a, const BlockVector& b) {
  BlockVector out = a;
  for (const auto& [j, coords] : b.parts) {
    auto [it, inserted] = out.parts.emplace(j, coords);
    if (!inserted) {
      if (it->second.size() != coords.size())
        throw std::invalid_argument("block add: dimension mismatch in block " +
                                    std::to_string(j));
      for (std::size_t i = 0; i < coords.size(); ++i) it->second[i] += coords[i];
    }
  }
  return out;
}

BlockVector block_subtract(const BlockVector& a, const BlockVector& b) {
  return block_add(a, block_scale(b, -1.0));
}

}  // namespace tightembed
