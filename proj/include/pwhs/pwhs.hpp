#pragma once

#include "pwhs/error.hpp"
#include "pwhs/field_core.hpp"
#include "pwhs/geometry.hpp"
#include "pwhs/pwhs_system.hpp"
#include "pwhs/poincare.hpp"
#include "pwhs/quadrature.hpp"
#include "pwhs/melnikov.hpp"
#include "pwhs/crossing_solver.hpp"
#include "pwhs/reference_systems.hpp"
#include "pwhs/format.hpp"
#include "pwhs/config.hpp"
#include "pwhs/verify.hpp"
