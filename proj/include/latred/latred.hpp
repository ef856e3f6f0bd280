#pragma once

// Umbrella header for the lattice-reduction library: numerical kernels,
// reduction algorithms, Babai estimation, and the Monte-Carlo MIMO
// benchmark engine. The CLI front end lives in latred/cli.hpp and is not
// pulled in here to keep vendor dependencies out of library-only builds.

#include "latred/errors.hpp"
#include "latred/estimation.hpp"
#include "latred/matrix.hpp"
#include "latred/qam.hpp"
#include "latred/qr.hpp"
#include "latred/reduction.hpp"
#include "latred/rng.hpp"
#include "latred/simulation.hpp"
