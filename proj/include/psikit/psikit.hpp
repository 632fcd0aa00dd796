#pragma once

#include "compare.hpp"
#include "domain.hpp"
#include "enclosure.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "family.hpp"
#include "pair_matrix.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sensitivity.hpp"
#include "solver.hpp"
#include "verify.hpp"
