#pragma once

#include "lieprop/algebra.hpp"
#include "lieprop/dynamics.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/factorization.hpp"
#include "lieprop/matrix_reps.hpp"
#include "lieprop/ode.hpp"
#include "lieprop/oracle.hpp"
#include "lieprop/propagator.hpp"
#include "lieprop/scenario.hpp"
