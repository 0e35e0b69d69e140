#pragma once

// Umbrella header for the fixed-budget drift analysis toolkit.

#include "driftbudget/bitstring.hpp"
#include "driftbudget/bounds.hpp"
#include "driftbudget/config.hpp"
#include "driftbudget/drift.hpp"
#include "driftbudget/ea.hpp"
#include "driftbudget/fitness.hpp"
#include "driftbudget/gain.hpp"
#include "driftbudget/lo_exact.hpp"
#include "driftbudget/montecarlo.hpp"
#include "driftbudget/potential.hpp"
#include "driftbudget/rng.hpp"
#include "driftbudget/stats.hpp"
#include "driftbudget/tail.hpp"
