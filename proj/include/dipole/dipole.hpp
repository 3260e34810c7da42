#pragma once

#include "complex.hpp"
#include "dual.hpp"
#include "errors.hpp"
#include "flow.hpp"
#include "forms.hpp"
#include "graph.hpp"
#include "lattice.hpp"
#include "numeric.hpp"
#include "pipeline.hpp"
#include "reconstruct.hpp"
#include "removal.hpp"
