#pragma once

#include "poromech/assembly.hpp"
#include "poromech/error.hpp"
#include "poromech/error_norms.hpp"
#include "poromech/geometry.hpp"
#include "poromech/mandel.hpp"
#include "poromech/mesh.hpp"
#include "poromech/mesh_generators.hpp"
#include "poromech/mesh_io.hpp"
#include "poromech/mfd.hpp"
#include "poromech/output.hpp"
#include "poromech/preconditioner.hpp"
#include "poromech/problems.hpp"
#include "poromech/quadrature.hpp"
#include "poromech/simulator.hpp"
#include "poromech/solver.hpp"
#include "poromech/stab.hpp"
#include "poromech/vem.hpp"
