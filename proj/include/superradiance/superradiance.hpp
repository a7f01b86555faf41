#pragma once

#include "core_model.hpp"
#include "errors.hpp"
#include "exact_oracle.hpp"
#include "observables.hpp"
#include "ode.hpp"
#include "pulse_analysis.hpp"
#include "strong_dynamics.hpp"
#include "trajectory.hpp"
#include "weak_dynamics.hpp"
