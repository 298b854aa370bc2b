#pragma once

// Umbrella header: eigenphase densities, samplers, and verification tools
// for unimodular circular ensembles.

#include "unicirc/density.hpp"
#include "unicirc/ensemble.hpp"
#include "unicirc/errors.hpp"
#include "unicirc/gamma.hpp"
#include "unicirc/morris.hpp"
#include "unicirc/oracle.hpp"
#include "unicirc/phases.hpp"
#include "unicirc/rng.hpp"
#include "unicirc/sampler.hpp"
#include "unicirc/stats.hpp"
#include "unicirc/version.hpp"
