#pragma once

// Umbrella header for the mixed-index fractional differential equation toolkit.

#include "mifde/errors.hpp"
#include "mifde/figures.hpp"
#include "mifde/gamma.hpp"
#include "mifde/l1_stepper.hpp"
#include "mifde/mittag_leffler.hpp"
#include "mifde/polynomial.hpp"
#include "mifde/rational.hpp"
#include "mifde/series_solver.hpp"
#include "mifde/spectral.hpp"
#include "mifde/stability.hpp"
#include "mifde/system_io.hpp"
#include "mifde/types.hpp"
