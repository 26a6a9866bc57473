#pragma once

// Everything except scenario file loading (botl/config.hpp), which needs
// toml++ on the include path.

#include "botl/assignment.hpp"
#include "botl/clustering.hpp"
#include "botl/csv.hpp"
#include "botl/errors.hpp"
#include "botl/estimators.hpp"
#include "botl/experiments.hpp"
#include "botl/geometry.hpp"
#include "botl/kmeans.hpp"
#include "botl/measurement.hpp"
#include "botl/rng.hpp"
#include "botl/scenario.hpp"
