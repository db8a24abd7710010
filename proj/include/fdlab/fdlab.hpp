// Umbrella header.
#pragma once

#include "fdlab/catalog.hpp"
#include "fdlab/config.hpp"
#include "fdlab/contractions.hpp"
#include "fdlab/expression.hpp"
#include "fdlab/metric.hpp"
#include "fdlab/report.hpp"
#include "fdlab/self_map.hpp"
#include "fdlab/simulation.hpp"
#include "fdlab/status.hpp"
#include "fdlab/theorems.hpp"
