#pragma once

// Umbrella header: the whole library in one include.

#include "eapms/core.hpp"
#include "eapms/experiment.hpp"
#include "eapms/formulations.hpp"
#include "eapms/io.hpp"
#include "eapms/linprog.hpp"
#include "eapms/lpt.hpp"
#include "eapms/oracle.hpp"
#include "eapms/rounding.hpp"
#include "eapms/solver.hpp"
