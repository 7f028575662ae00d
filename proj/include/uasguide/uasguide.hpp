#pragma once

#include "uasguide/checkpoint.hpp"
#include "uasguide/env_moving.hpp"
#include "uasguide/env_static.hpp"
#include "uasguide/eval.hpp"
#include "uasguide/geometry.hpp"
#include "uasguide/manifest.hpp"
#include "uasguide/mlp.hpp"
#include "uasguide/policy.hpp"
#include "uasguide/ppo.hpp"
#include "uasguide/rng.hpp"
#include "uasguide/rollout.hpp"
#include "uasguide/scenario.hpp"
#include "uasguide/svg_plot.hpp"
#include "uasguide/textio.hpp"
#include "uasguide/version.hpp"
