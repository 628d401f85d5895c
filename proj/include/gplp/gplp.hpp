#pragma once

#include "gplp/adjacency.hpp"
#include "gplp/autodiff.hpp"
#include "gplp/checkpoint.hpp"
#include "gplp/error.hpp"
#include "gplp/gradcheck.hpp"
#include "gplp/graph.hpp"
#include "gplp/ingest.hpp"
#include "gplp/knockout.hpp"
#include "gplp/metrics.hpp"
#include "gplp/model.hpp"
#include "gplp/ops.hpp"
#include "gplp/optimizer.hpp"
#include "gplp/random.hpp"
#include "gplp/subgraph.hpp"
#include "gplp/synth.hpp"
#include "gplp/tensor.hpp"
#include "gplp/train.hpp"
