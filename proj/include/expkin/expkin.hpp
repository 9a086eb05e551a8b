#pragma once

#include "expkin/bench.hpp"
#include "expkin/dh.hpp"
#include "expkin/dynamics.hpp"
#include "expkin/kinematics.hpp"
#include "expkin/model.hpp"
#include "expkin/model_io.hpp"
#include "expkin/robots.hpp"
#include "expkin/se3.hpp"
#include "expkin/sim.hpp"
