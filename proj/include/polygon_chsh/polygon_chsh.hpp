// Umbrella header for the polygon-CHSH library.
#pragma once

#include "analytic.hpp"
#include "bipartite.hpp"
#include "chsh.hpp"
#include "linalg.hpp"
#include "lp.hpp"
#include "search.hpp"
#include "theory.hpp"
