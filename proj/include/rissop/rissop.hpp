#pragma once

#include "rissop/numerics.hpp"
#include "rissop/philox.hpp"
#include "rissop/channel.hpp"
#include "rissop/scenario_file.hpp"
#include "rissop/distributions.hpp"
#include "rissop/analysis.hpp"
#include "rissop/statistics.hpp"
#include "rissop/montecarlo.hpp"
#include "rissop/sweep.hpp"
