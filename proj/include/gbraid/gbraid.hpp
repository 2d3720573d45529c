#pragma once

#include "gbraid/error.hpp"
#include "gbraid/graph.hpp"
#include "gbraid/cube_complex.hpp"
#include "gbraid/homology.hpp"
#include "gbraid/raag.hpp"
#include "gbraid/crisp_wiest.hpp"
#include "gbraid/subgroup_lab.hpp"
#include "gbraid/report.hpp"
