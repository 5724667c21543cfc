#pragma once

#include "subideal/complex_core.hpp"
#include "subideal/csv.hpp"
#include "subideal/design.hpp"
#include "subideal/filtering.hpp"
#include "subideal/quadrature.hpp"
#include "subideal/spectral.hpp"
#include "subideal/types.hpp"
#include "subideal/verify.hpp"
