#pragma once

#include "choquard/asymptotics.hpp"
#include "choquard/errors.hpp"
#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/groundstate.hpp"
#include "choquard/linear_solver.hpp"
#include "choquard/params.hpp"
#include "choquard/polarization.hpp"
#include "choquard/profile_io.hpp"
#include "choquard/riesz.hpp"
#include "choquard/scaling.hpp"
