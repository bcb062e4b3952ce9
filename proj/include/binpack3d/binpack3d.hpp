#pragma once

#include "binpack3d/model.hpp"
#include "binpack3d/random.hpp"
#include "binpack3d/packer.hpp"
#include "binpack3d/solution_io.hpp"
#include "binpack3d/genetic.hpp"
#include "binpack3d/engine.hpp"
#include "binpack3d/cutgen.hpp"
#include "binpack3d/oracle.hpp"
#include "binpack3d/validate.hpp"
