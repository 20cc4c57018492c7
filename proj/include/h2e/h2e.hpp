#pragma once

#include "h2e/basis.hpp"
#include "h2e/bell.hpp"
#include "h2e/boys.hpp"
#include "h2e/correlation.hpp"
#include "h2e/errors.hpp"
#include "h2e/fci.hpp"
#include "h2e/integrals.hpp"
#include "h2e/molecule.hpp"
#include "h2e/pipeline.hpp"
#include "h2e/quadrature.hpp"
#include "h2e/scf.hpp"
