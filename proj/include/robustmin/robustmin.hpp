#pragma once

#include "robustmin/comparators.hpp"
#include "robustmin/core.hpp"
#include "robustmin/harness.hpp"
#include "robustmin/inner_max.hpp"
#include "robustmin/leh.hpp"
#include "robustmin/rng.hpp"
#include "robustmin/stats.hpp"
#include "robustmin/testbed.hpp"
#include "robustmin/voronoi2d.hpp"
