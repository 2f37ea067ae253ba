#pragma once

// Umbrella header for the vpipe design-analysis library.

#include "vpipe/config.hpp"
#include "vpipe/dynamics.hpp"
#include "vpipe/errors.hpp"
#include "vpipe/explorer.hpp"
#include "vpipe/geometry.hpp"
#include "vpipe/mechanism.hpp"
#include "vpipe/stability.hpp"
#include "vpipe/statics.hpp"
#include "vpipe/studies.hpp"
#include "vpipe/transmission.hpp"
#include "vpipe/units.hpp"
