#pragma once

#include "hspan/metrics/reference.hpp"
#include "hspan/metrics/no_reference.hpp"
#include "hspan/metrics/scores.hpp"
