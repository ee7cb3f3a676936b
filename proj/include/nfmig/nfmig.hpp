#pragma once

#include "nfmig/core/topology.hpp"
#include "nfmig/core/types.hpp"
#include "nfmig/error.hpp"
#include "nfmig/memory/dirty_process.hpp"
#include "nfmig/memory/memory_image.hpp"
#include "nfmig/migration/engine.hpp"
#include "nfmig/policy/policy.hpp"
#include "nfmig/scenario/metrics.hpp"
#include "nfmig/scenario/runner.hpp"
#include "nfmig/scenario/scenario.hpp"
#include "nfmig/scenario/sweep.hpp"
#include "nfmig/sim/rng.hpp"
#include "nfmig/sim/simulator.hpp"
#include "nfmig/sim/time.hpp"
