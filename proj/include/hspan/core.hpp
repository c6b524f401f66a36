#pragma once

#include "hspan/core/error.hpp"
#include "hspan/core/grid.hpp"
#include "hspan/core/types.hpp"
#include "hspan/core/container.hpp"
#include "hspan/core/spectral.hpp"
#include "hspan/core/parallel.hpp"
