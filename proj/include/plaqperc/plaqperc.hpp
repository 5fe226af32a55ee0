#pragma once

#include "plaqperc/bitvector.hpp"
#include "plaqperc/crossing.hpp"
#include "plaqperc/entangle.hpp"
#include "plaqperc/error.hpp"
#include "plaqperc/experiments.hpp"
#include "plaqperc/homology.hpp"
#include "plaqperc/lattice.hpp"
#include "plaqperc/loops.hpp"
#include "plaqperc/max_flow.hpp"
#include "plaqperc/rng.hpp"
#include "plaqperc/sampling.hpp"
#include "plaqperc/surface.hpp"
#include "plaqperc/union_find.hpp"
#include "plaqperc/voxels.hpp"
