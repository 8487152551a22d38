#pragma once

// Umbrella header.

#include "bootstrap.hpp"
#include "evaluate.hpp"
#include "loess.hpp"
#include "mstl.hpp"
#include "preprocess.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "series_io.hpp"
#include "simulate.hpp"
#include "stl.hpp"
#include "supsmu.hpp"
