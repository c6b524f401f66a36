#pragma once

#include "hspan/bench/synth.hpp"
#include "hspan/bench/signature.hpp"
#include "hspan/bench/render.hpp"
#include "hspan/bench/report.hpp"
#include "hspan/bench/runner.hpp"
