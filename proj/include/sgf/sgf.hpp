#pragma once

#include "sgf/error.hpp"
#include "sgf/spectral/chebyshev.hpp"
#include "sgf/spectral/grid.hpp"
#include "sgf/spectral/field.hpp"
#include "sgf/spectral/elliptic.hpp"
#include "sgf/spectral/quadrature.hpp"
#include "sgf/fields/velocity.hpp"
#include "sgf/fields/norms.hpp"
#include "sgf/fields/advection.hpp"
#include "sgf/dynamics/branch.hpp"
#include "sgf/dynamics/state.hpp"
#include "sgf/dynamics/imex.hpp"
#include "sgf/dynamics/stepper.hpp"
#include "sgf/dynamics/run.hpp"
#include "sgf/diagnostics/record.hpp"
#include "sgf/diagnostics/energy.hpp"
#include "sgf/diagnostics/kato.hpp"
#include "sgf/diagnostics/corrector.hpp"
#include "sgf/diagnostics/inequalities.hpp"
#include "sgf/experiments/regime.hpp"
#include "sgf/experiments/initial_data.hpp"
#include "sgf/experiments/sweep.hpp"
#include "sgf/io/config.hpp"
#include "sgf/io/csv.hpp"
#include "sgf/io/snapshot.hpp"
#include "sgf/verification/oracles.hpp"
#include "sgf/verification/oracle_suite.hpp"
