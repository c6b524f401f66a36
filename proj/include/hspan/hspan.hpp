#pragma once

#include "hspan/core.hpp"
#include "hspan/raster.hpp"
#include "hspan/sharpen.hpp"
#include "hspan/metrics.hpp"
#include "hspan/pipeline.hpp"
#include "hspan/bench.hpp"
