#pragma once

#include "onemax/asymptotics.hpp"
#include "onemax/bounds.hpp"
#include "onemax/drift.hpp"
#include "onemax/errors.hpp"
#include "onemax/hitting_time.hpp"
#include "onemax/scalar.hpp"
#include "onemax/series.hpp"
#include "onemax/simulation.hpp"
#include "onemax/special_functions.hpp"
