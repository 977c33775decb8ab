#pragma once

// Umbrella header. The JSON helpers (polynomial_json.hpp, trace_json.hpp)
// are left out so the core only needs Eigen.

#include "thirdopt/conditions.hpp"
#include "thirdopt/corpus.hpp"
#include "thirdopt/cubic_step.hpp"
#include "thirdopt/escape.hpp"
#include "thirdopt/polynomial.hpp"
#include "thirdopt/spectral.hpp"
#include "thirdopt/sym_tensor3.hpp"
#include "thirdopt/types.hpp"
