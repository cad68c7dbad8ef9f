#pragma once

#include "bco/blackout.hpp"
#include "bco/categorical.hpp"
#include "bco/config.hpp"
#include "bco/decode.hpp"
#include "bco/denoiser.hpp"
#include "bco/errors.hpp"
#include "bco/instance.hpp"
#include "bco/io.hpp"
#include "bco/matrix.hpp"
#include "bco/rng.hpp"
#include "bco/schedule.hpp"
#include "bco/solvers.hpp"
