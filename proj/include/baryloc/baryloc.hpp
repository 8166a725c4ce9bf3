#pragma once

#include "baryloc/error.hpp"
#include "baryloc/geometry.hpp"
#include "baryloc/network.hpp"
#include "baryloc/preconditioner.hpp"
#include "baryloc/rng.hpp"
#include "baryloc/scenario.hpp"
#include "baryloc/signs.hpp"
#include "baryloc/solver.hpp"
#include "baryloc/spectra.hpp"
#include "baryloc/types.hpp"
