#pragma once

#include "chemotaxis/chemical_solver.hpp"
#include "chemotaxis/config.hpp"
#include "chemotaxis/diagnostics.hpp"
#include "chemotaxis/expression.hpp"
#include "chemotaxis/field.hpp"
#include "chemotaxis/io.hpp"
#include "chemotaxis/linear_solver.hpp"
#include "chemotaxis/mesh.hpp"
#include "chemotaxis/model_params.hpp"
#include "chemotaxis/operators.hpp"
#include "chemotaxis/presets.hpp"
#include "chemotaxis/sparse.hpp"
#include "chemotaxis/svg_plot.hpp"
#include "chemotaxis/sweep.hpp"
#include "chemotaxis/timestepper.hpp"
