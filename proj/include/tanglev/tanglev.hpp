#pragma once

#include "braiding.hpp"
#include "coloring.hpp"
#include "diagram.hpp"
#include "error.hpp"
#include "evaluator.hpp"
#include "factgroup.hpp"
#include "io.hpp"
#include "moves.hpp"
#include "sampling.hpp"
#include "scalar.hpp"
#include "uqalgebra.hpp"
