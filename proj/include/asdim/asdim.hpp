#pragma once

#include "asdim/cover_engine.hpp"
#include "asdim/distortion.hpp"
#include "asdim/experiments.hpp"
#include "asdim/io.hpp"
#include "asdim/metric_core.hpp"
#include "asdim/pipeline.hpp"
#include "asdim/tree_embed.hpp"
#include "asdim/zero_dim.hpp"
