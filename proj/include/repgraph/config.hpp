#pragma once

#include "repgraph/types.hpp"

namespace repgraph {

/// The three penalty levels of the per-node problem, plus the baseline
/// switches that remove a block outright: drop_alpha excludes the lag block,
/// drop_delta the latent block. Dropping is structural (the block has no
/// columns), not a large-penalty approximation.
struct PenaltyConfig {
  double lambda = 0.0;  // graph penalty on theta
  double beta = 0.0;    // lag penalty on alpha
  double gamma = 0.0;   // fused penalty on the latent-effect differences
  bool drop_alpha = false;
  bool drop_delta = false;

  void validate() const {
    if (lambda < 0.0 || beta < 0.0 || gamma < 0.0)
      throw value_error("penalty levels must be nonnegative");
  }
};

}  // namespace repgraph
