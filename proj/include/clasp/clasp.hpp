#pragma once

#include "clasp/dataset.hpp"
#include "clasp/ensemble.hpp"
#include "clasp/knn.hpp"
#include "clasp/metrics.hpp"
#include "clasp/profile.hpp"
#include "clasp/rng.hpp"
#include "clasp/scoring.hpp"
#include "clasp/segmentation.hpp"
#include "clasp/series.hpp"
#include "clasp/suss.hpp"
#include "clasp/validation.hpp"
