#pragma once

#include "hspan/pipeline/cleaning.hpp"
#include "hspan/pipeline/tiling.hpp"
#include "hspan/pipeline/dataset.hpp"
