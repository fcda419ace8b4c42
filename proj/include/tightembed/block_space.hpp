// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <vector>

namespace tightembed {

struct BlockSpec {
  double p = 2.0;  // block exponent
  int dim = 0;     // block coordinate count
};

/// Finite l_s-sum of l_p blocks: ||v|| = (sum_j ||v_j||_{p_j}^s)^{1/s},
/// max over blocks when s = inf.
class BlockSpace {
 public:
  BlockSpace(double outer_s, std::vector<BlockSpec> blocks);

  double outer_s() const { return s_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const BlockSpec& block(int j) const {
    return blocks_[static_cast<std::size_t>(j)];
  }
  const std::vector<BlockSpec>& blocks() const { return blocks_; }

 private:
  double s_ = 2.0;
  std::vector<BlockSpec> blocks_;
};

/// Element of a block space, sparse by block.
struct BlockVector {
  std::map<int, std::vector<double>> parts;

  bool is_zero() const { return parts.empty(); }
};

double block_norm(const BlockSpace& space, const BlockVector& v);

/// Zeroes every block outside J. Contractive and idempotent.
BlockVector block_project(const BlockVector& v, const std::vector<int>& keep);

BlockVector block_subtract(const BlockVector& a, const BlockVector& b);
BlockVector block_scale(const BlockVector& v, double c);
BlockVector block_add(const BlockVector& a, const BlockVector& b);

}  // namespace tightembed
