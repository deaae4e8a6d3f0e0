#pragma once

// Umbrella header.

#include "wavemix/bench.hpp"
#include "wavemix/filters.hpp"
#include "wavemix/image.hpp"
#include "wavemix/io.hpp"
#include "wavemix/metrics.hpp"
#include "wavemix/multiscale.hpp"
#include "wavemix/noise.hpp"
#include "wavemix/patches.hpp"
#include "wavemix/rng.hpp"
#include "wavemix/tld.hpp"
#include "wavemix/wavelets.hpp"
