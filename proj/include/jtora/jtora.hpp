#pragma once

#include "jtora/baselines.hpp"
#include "jtora/compute.hpp"
#include "jtora/config.hpp"
#include "jtora/experiment.hpp"
#include "jtora/model.hpp"
#include "jtora/power.hpp"
#include "jtora/rng.hpp"
#include "jtora/scenario.hpp"
#include "jtora/search.hpp"
