// se3lqr: screw-coordinate dynamics, linearization and TV-LQR on SE(3)
// SPDX-License-Identifier: MIT

#pragma once

#include "se3lqr/checks.hpp"
#include "se3lqr/config.hpp"
#include "se3lqr/csv.hpp"
#include "se3lqr/dynamics.hpp"
#include "se3lqr/liealg.hpp"
#include "se3lqr/linearize.hpp"
#include "se3lqr/pipeline.hpp"
#include "se3lqr/sim.hpp"
#include "se3lqr/tvlqr.hpp"
#include "se3lqr/types.hpp"
