#pragma once

// Umbrella header for the mFSIR multi-label feature-selection library.

#include "mfsir/arff.hpp"
#include "mfsir/csv.hpp"
#include "mfsir/dataset.hpp"
#include "mfsir/error.hpp"
#include "mfsir/estimator.hpp"
#include "mfsir/experiment.hpp"
#include "mfsir/graph.hpp"
#include "mfsir/metrics.hpp"
#include "mfsir/mlknn.hpp"
#include "mfsir/rng.hpp"
#include "mfsir/stats.hpp"
#include "mfsir/synthetic.hpp"
