#pragma once

#include "fdvrp/error.hpp"
#include "fdvrp/streetmap.hpp"
#include "fdvrp/routing.hpp"
#include "fdvrp/instgen.hpp"
#include "fdvrp/core.hpp"
#include "fdvrp/heuristics.hpp"
#include "fdvrp/report.hpp"
#include "fdvrp/render.hpp"
#include "fdvrp/synthetic.hpp"
