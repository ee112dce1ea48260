#pragma once

// Umbrella header for the d-permutation library.

#include "dperm/dpermutation.hpp"
#include "dperm/enumeration.hpp"
#include "dperm/permutation.hpp"
#include "dperm/sequences.hpp"
#include "dperm/symmetry.hpp"
