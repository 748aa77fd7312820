#pragma once

// Neighborhood estimation of exponential-family conditional-independence
// graphs from replicated observations with one-lag temporal correlation and
// piecewise-constant unmeasured-confounder effects, plus the matching
// simulation scenarios, tuning selectors, and structure-recovery scoring.

#include "repgraph/config.hpp"
#include "repgraph/dataset.hpp"
#include "repgraph/design.hpp"
#include "repgraph/evaluation.hpp"
#include "repgraph/family.hpp"
#include "repgraph/fitting.hpp"
#include "repgraph/fused_basis.hpp"
#include "repgraph/gaussian_solver.hpp"
#include "repgraph/glm_solver.hpp"
#include "repgraph/graph.hpp"
#include "repgraph/io.hpp"
#include "repgraph/node_fit.hpp"
#include "repgraph/parallel.hpp"
#include "repgraph/penalized_ls.hpp"
#include "repgraph/rng.hpp"
#include "repgraph/simgen.hpp"
#include "repgraph/tuning.hpp"
#include "repgraph/types.hpp"
#include "repgraph/version.hpp"
