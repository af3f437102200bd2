#pragma once

// Umbrella header.

#include "hetrec/baselines.hpp"
#include "hetrec/csv.hpp"
#include "hetrec/errors.hpp"
#include "hetrec/experiment.hpp"
#include "hetrec/fitness.hpp"
#include "hetrec/ga.hpp"
#include "hetrec/graph.hpp"
#include "hetrec/interaction.hpp"
#include "hetrec/manifest.hpp"
#include "hetrec/metrics.hpp"
#include "hetrec/parallel.hpp"
#include "hetrec/ppr.hpp"
#include "hetrec/recommend.hpp"
#include "hetrec/schema.hpp"
#include "hetrec/split.hpp"
#include "hetrec/stats.hpp"
#include "hetrec/time.hpp"
#include "hetrec/version.hpp"
#include "hetrec/weights.hpp"
