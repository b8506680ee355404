#pragma once

// Umbrella header for the whole engine.

#include "dprf/agents.hpp"
#include "dprf/backends.hpp"
#include "dprf/core.hpp"
#include "dprf/datasets.hpp"
#include "dprf/digest.hpp"
#include "dprf/errors.hpp"
#include "dprf/http_backend.hpp"
#include "dprf/journal.hpp"
#include "dprf/loop.hpp"
#include "dprf/metric_suite.hpp"
#include "dprf/metrics.hpp"
#include "dprf/prompts.hpp"
#include "dprf/runner.hpp"
#include "dprf/simworld.hpp"
