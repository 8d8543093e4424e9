#pragma once

/// Umbrella header for the parameter-less evolutionary algorithm library.

#include "pea/config.hpp"
#include "pea/core.hpp"
#include "pea/engines.hpp"
#include "pea/mpm.hpp"
#include "pea/problems.hpp"
#include "pea/race.hpp"
#include "pea/runner.hpp"
