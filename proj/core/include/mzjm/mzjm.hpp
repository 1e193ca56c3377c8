#pragma once

#include "mzjm/appendix.hpp"
#include "mzjm/error.hpp"
#include "mzjm/jointmeas.hpp"
#include "mzjm/linalg.hpp"
#include "mzjm/mzi.hpp"
#include "mzjm/qubit.hpp"
#include "mzjm/random.hpp"
