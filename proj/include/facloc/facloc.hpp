#pragma once

// Umbrella header.

#include "facloc/audit.hpp"
#include "facloc/geometry.hpp"
#include "facloc/io.hpp"
#include "facloc/line_mechanisms.hpp"
#include "facloc/model.hpp"
#include "facloc/plane_mechanisms.hpp"
#include "facloc/rng.hpp"
