#pragma once

// Umbrella header for the whole toolkit.

#include "feynkit/counting.hpp"
#include "feynkit/diagram.hpp"
#include "feynkit/dsl.hpp"
#include "feynkit/enumeration.hpp"
#include "feynkit/errors.hpp"
#include "feynkit/integral.hpp"
#include "feynkit/json_report.hpp"
#include "feynkit/topology.hpp"
