#pragma once

#include "hspan/raster/kernel.hpp"
#include "hspan/raster/convolve.hpp"
#include "hspan/raster/resample.hpp"
#include "hspan/raster/stats.hpp"
#include "hspan/raster/histogram.hpp"
#include "hspan/raster/lstsq.hpp"
