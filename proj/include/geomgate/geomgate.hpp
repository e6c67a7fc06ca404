#pragma once

#include "geomgate/types.hpp"
#include "geomgate/waveform.hpp"
#include "geomgate/schedule.hpp"
#include "geomgate/propagator.hpp"
#include "geomgate/path.hpp"
#include "geomgate/gates.hpp"
#include "geomgate/schemes.hpp"
#include "geomgate/registry.hpp"
#include "geomgate/error_curve.hpp"
#include "geomgate/noise.hpp"
#include "geomgate/experiments.hpp"
#include "geomgate/io.hpp"
