#ifndef SLGH_SLGH_HPP
#define SLGH_SLGH_HPP

#include "slgh/core.hpp"
#include "slgh/objectives.hpp"
#include "slgh/smoothing.hpp"
#include "slgh/optimizers.hpp"
#include "slgh/harness/plan.hpp"
#include "slgh/harness/trace_io.hpp"
#include "slgh/harness/runner.hpp"

#endif  // SLGH_SLGH_HPP
