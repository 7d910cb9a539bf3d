#pragma once

#include "boolnoise/common.hpp"
#include "boolnoise/families.hpp"
#include "boolnoise/function.hpp"
#include "boolnoise/influence.hpp"
#include "boolnoise/majority.hpp"
#include "boolnoise/noise.hpp"
#include "boolnoise/parallel.hpp"
#include "boolnoise/percolation.hpp"
#include "boolnoise/report.hpp"
#include "boolnoise/rng.hpp"
#include "boolnoise/table_io.hpp"
#include "boolnoise/walk.hpp"
