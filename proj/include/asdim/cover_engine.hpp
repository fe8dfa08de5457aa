#pragma once

#include "asdim/cover.hpp"
#include "asdim/ladder.hpp"
#include "asdim/nagata.hpp"
