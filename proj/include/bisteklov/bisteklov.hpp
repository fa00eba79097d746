#pragma once

#include "bisteklov/boundary_weight.hpp"
#include "bisteklov/counting.hpp"
#include "bisteklov/halfspace.hpp"
#include "bisteklov/polynomial.hpp"
#include "bisteklov/problem.hpp"
#include "bisteklov/spectra.hpp"
#include "bisteklov/symbols.hpp"
