#pragma once

// Umbrella header for the whole library.

#include "closed_forms.hpp"
#include "configurations.hpp"
#include "dop853.hpp"
#include "errors.hpp"
#include "hill.hpp"
#include "kepler.hpp"
#include "ode.hpp"
#include "render.hpp"
#include "scan.hpp"
#include "symplectic.hpp"
#include "trace.hpp"
#include "verify.hpp"
