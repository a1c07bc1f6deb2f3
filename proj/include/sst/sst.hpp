#pragma once

#include "sst/cohorts.hpp"
#include "sst/content_features.hpp"
#include "sst/corpus.hpp"
#include "sst/dismantling.hpp"
#include "sst/hashtags.hpp"
#include "sst/metrics.hpp"
#include "sst/pipeline.hpp"
#include "sst/stats.hpp"
#include "sst/synth.hpp"
