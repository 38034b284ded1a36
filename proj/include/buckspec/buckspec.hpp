#pragma once

#include "buckspec/assembly.hpp"
#include "buckspec/basis.hpp"
#include "buckspec/bounds.hpp"
#include "buckspec/eigensolve.hpp"
#include "buckspec/errors.hpp"
#include "buckspec/gap_moment.hpp"
#include "buckspec/quadrature.hpp"
#include "buckspec/rules.hpp"
#include "buckspec/solver.hpp"
#include "buckspec/spectrum_io.hpp"
#include "buckspec/types.hpp"
#include "buckspec/verify.hpp"
#include "buckspec/version.hpp"
