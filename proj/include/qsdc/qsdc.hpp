#pragma once

// Umbrella header: the whole simulator and attack harness.

#include "qsdc/attack/entangle_measure.hpp"
#include "qsdc/attack/modified_attacks.hpp"
#include "qsdc/attack/yzcss_attacks.hpp"
#include "qsdc/basis.hpp"
#include "qsdc/bits.hpp"
#include "qsdc/harness/report.hpp"
#include "qsdc/harness/scenario.hpp"
#include "qsdc/harness/stats.hpp"
#include "qsdc/pool.hpp"
#include "qsdc/protocol/encoding.hpp"
#include "qsdc/protocol/modified.hpp"
#include "qsdc/protocol/yzcss.hpp"
#include "qsdc/replay.hpp"
#include "qsdc/rng.hpp"
#include "qsdc/state.hpp"
#include "qsdc/transcript.hpp"
