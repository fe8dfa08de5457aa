#pragma once

#include "asdim/generators.hpp"
#include "asdim/metric_ops.hpp"
#include "asdim/rational.hpp"
#include "asdim/space.hpp"
