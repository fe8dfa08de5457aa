#pragma once

#include "asdim/embed.hpp"
#include "asdim/mtrunc.hpp"
#include "asdim/tree.hpp"
